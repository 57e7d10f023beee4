#include "ardnet/csv.hpp"

#include "ardnet/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string_view>
#include <vector>

namespace ardnet {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string location(std::size_t line, std::size_t column) {
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

double parseNumber(std::string_view token, std::size_t line, std::size_t column) {
    token = trim(token);
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || end != token.data() + token.size()) {
        throw ParseError("non-numeric token '" + std::string(token) + "' at " +
                             location(line, column),
                         line, column);
    }
    if (!std::isfinite(value)) {
        throw ParseError("non-finite value at " + location(line, column), line, column);
    }
    return value;
}

}  // namespace

Matrix parseMatrixCsv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> blank_lines;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            blank_lines.push_back(line_no);
            continue;
        }
        if (!blank_lines.empty()) {
            throw ParseError("blank line inside matrix at " + location(blank_lines.front(), 1),
                             blank_lines.front(), 1);
        }
        std::vector<double> row;
        std::string_view rest(line);
        std::size_t column = 1;
        while (true) {
            const auto comma = rest.find(',');
            row.push_back(parseNumber(rest.substr(0, comma), line_no, column));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
            ++column;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError("ragged row at line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(rows.front().size()) + " fields, found " +
                                 std::to_string(row.size()),
                             line_no, std::min(row.size(), rows.front().size()) + 1);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("empty matrix file", 1, 1);

    Matrix M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            M(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    return M;
}

Matrix readMatrixCsv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return parseMatrixCsv(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.line(), e.column());
    }
}

std::string formatMatrixCsv(const Matrix& M) {
    requireFinite(M, "matrix to write");
    std::string out;
    out.reserve(static_cast<std::size_t>(M.size()) * 8);
    char buf[32];
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            if (j > 0) out.push_back(',');
            const auto res = std::to_chars(buf, buf + sizeof(buf), M(i, j));
            out.append(buf, res.ptr);
        }
        out.push_back('\n');
    }
    return out;
}

void writeMatrixCsv(const Matrix& M, const std::filesystem::path& path) {
    const std::string text = formatMatrixCsv(M);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace ardnet
