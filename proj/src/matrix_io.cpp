#include "fracridge/matrix_io.hpp"

#include "fracridge/error.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace fracridge {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

bool try_parse(std::string_view text, double& out) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) return false;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

void put_u64(std::ostream& os, std::uint64_t v) {
    std::array<char, 8> bytes;
    for (int i = 0; i < 8; ++i) bytes[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(bytes.data(), 8);
}

std::uint64_t get_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

std::ofstream open_output(const std::filesystem::path& path, std::ios::openmode mode) {
    std::ofstream os(path, mode);
    if (!os) throw IoError("cannot write '" + path.string() + "'");
    return os;
}

}  // namespace

MatrixFormat format_for_path(const std::filesystem::path& path) {
    return path.extension() == ".frmx" ? MatrixFormat::binary : MatrixFormat::csv;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 32> buf;
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

double parse_double(std::string_view text) {
    double v = 0.0;
    if (!try_parse(trim(text), v)) throw IoError("malformed number '" + std::string(text) + "'");
    return v;
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open '" + path.string() + "'");

    std::vector<double> values;
    std::size_t cols = 0;
    std::size_t rows = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        std::vector<double> row(fields.size());
        bool numeric = true;
        for (std::size_t i = 0; i < fields.size() && numeric; ++i) numeric = try_parse(fields[i], row[i]);
        if (!numeric) {
            if (rows == 0 && line_no == 1) continue;  // header
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": non-numeric field");
        }
        if (rows == 0)
            cols = row.size();
        else if (row.size() != cols)
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                          std::to_string(cols) + " fields, found " + std::to_string(row.size()));
        values.insert(values.end(), row.begin(), row.end());
        ++rows;
    }
    if (rows == 0) throw IoError("'" + path.string() + "' contains no data rows");

    Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Index>(r), static_cast<Index>(c)) = values[r * cols + c];
    return m;
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m,
                      const std::vector<std::string>& header) {
    std::ostringstream os;
    if (!header.empty()) {
        if (static_cast<Index>(header.size()) != m.cols()) throw InvalidInput("CSV header width mismatch");
        for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
        os << '\n';
    }
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c) os << (c ? "," : "") << format_double(m(r, c));
        os << '\n';
    }
    auto out = open_output(path, std::ios::out | std::ios::trunc);
    out << os.str();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Matrix read_matrix_binary(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open '" + path.string() + "'");
    std::array<unsigned char, 21> head{};
    if (!is.read(reinterpret_cast<char*>(head.data()), head.size()))
        throw IoError("'" + path.string() + "' is too short for a matrix header");
    if (std::memcmp(head.data(), kBinaryMagic, 4) != 0) throw IoError("'" + path.string() + "' lacks the FRMX magic");
    if (head[4] != kBinaryVersion)
        throw IoError("'" + path.string() + "' has unsupported version " + std::to_string(head[4]));
    const std::uint64_t rows = get_u64(head.data() + 5);
    const std::uint64_t cols = get_u64(head.data() + 13);
    if (rows != 0 && cols > (UINT64_MAX / 8) / rows) throw IoError("'" + path.string() + "' declares an absurd shape");

    std::vector<unsigned char> payload(rows * cols * 8);
    if (!is.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload.size())))
        throw IoError("'" + path.string() + "' is truncated");
    if (is.peek() != std::char_traits<char>::eof()) throw IoError("'" + path.string() + "' has trailing bytes");

    Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
    for (std::uint64_t r = 0; r < rows; ++r)
        for (std::uint64_t c = 0; c < cols; ++c)
            m(static_cast<Index>(r), static_cast<Index>(c)) =
                std::bit_cast<double>(get_u64(payload.data() + 8 * (r * cols + c)));
    return m;
}

void write_matrix_binary(const std::filesystem::path& path, const Matrix& m) {
    auto os = open_output(path, std::ios::out | std::ios::binary | std::ios::trunc);
    os.write(kBinaryMagic, 4);
    os.put(static_cast<char>(kBinaryVersion));
    put_u64(os, static_cast<std::uint64_t>(m.rows()));
    put_u64(os, static_cast<std::uint64_t>(m.cols()));
    std::vector<char> row(static_cast<std::size_t>(m.cols()) * 8);
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c) {
            const auto bits = std::bit_cast<std::uint64_t>(m(r, c));
            for (int b = 0; b < 8; ++b)
                row[static_cast<std::size_t>(c) * 8 + static_cast<std::size_t>(b)] =
                    static_cast<char>((bits >> (8 * b)) & 0xff);
        }
        os.write(row.data(), static_cast<std::streamsize>(row.size()));
    }
    if (!os) throw IoError("failed writing '" + path.string() + "'");
}

Matrix read_matrix(const std::filesystem::path& path) {
    return format_for_path(path) == MatrixFormat::binary ? read_matrix_binary(path) : read_matrix_csv(path);
}

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
    if (format_for_path(path) == MatrixFormat::binary)
        write_matrix_binary(path, m);
    else
        write_matrix_csv(path, m);
}

}  // namespace fracridge
