#pragma once

#include "fracridge/types.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fracridge {

enum class MatrixFormat { csv, binary };

/// .frmx selects the binary format, anything else CSV.
MatrixFormat format_for_path(const std::filesystem::path& path);

/// CSV: comma-delimited, one matrix row per line, optional single header
/// row (detected when the first line does not parse as numbers). Values are
/// written in shortest round-trip form, with "inf", "-inf" and "nan" for
/// non-finite entries.
Matrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m,
                      const std::vector<std::string>& header = {});

/// Binary: "FRMX", version byte 1, u64 LE rows, u64 LE cols, then row-major
/// little-endian float64 values.
inline constexpr char kBinaryMagic[4] = {'F', 'R', 'M', 'X'};
inline constexpr unsigned char kBinaryVersion = 1;

Matrix read_matrix_binary(const std::filesystem::path& path);
void write_matrix_binary(const std::filesystem::path& path, const Matrix& m);

/// Dispatch on the file extension.
Matrix read_matrix(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const Matrix& m);

/// Shortest representation that parses back to the same double.
std::string format_double(double v);
/// Parses one CSV field; throws IoError on malformed text.
double parse_double(std::string_view text);

}  // namespace fracridge
