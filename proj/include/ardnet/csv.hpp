#pragma once

#include "ardnet/linalg.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace ardnet {

/// Headerless comma-separated matrix, one row per line. Blank trailing
/// lines and CRLF endings are tolerated; ragged rows, non-numeric or
/// non-finite tokens raise ParseError with the 1-based line and field.
Matrix parseMatrixCsv(std::istream& in);
Matrix readMatrixCsv(const std::filesystem::path& path);

/// Shortest round-trip decimal formatting; reading the output back gives
/// bit-identical doubles.
std::string formatMatrixCsv(const Matrix& M);
void writeMatrixCsv(const Matrix& M, const std::filesystem::path& path);

}  // namespace ardnet
