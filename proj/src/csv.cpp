#include "trobust/csv.hpp"

#include "trobust/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace trobust::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_cell(std::string_view cell, std::size_t row, std::size_t column) {
  double value = 0.0;
  const char* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ParseError("non-numeric cell '" + std::string(cell) + "' at row " + std::to_string(row) + ", column " +
                         std::to_string(column),
                     row, column);
  }
  return value;
}

}  // namespace

linalg::RegressionData parse_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t columns = 0;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    const std::string_view line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string_view> cells = split(line);
    if (!header_seen) {
      header_seen = true;
      columns = cells.size();
      continue;
    }
    if (cells.size() != columns) {
      throw ParseError("row " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                           " cells, header has " + std::to_string(columns),
                       line_no, std::min(cells.size(), columns) + 1);
    }
    std::vector<double> values;
    values.reserve(columns);
    for (std::size_t c = 0; c < columns; ++c) values.push_back(parse_cell(cells[c], line_no, c + 1));
    rows.push_back(std::move(values));
  }
  if (!header_seen) throw ParseError("empty input: missing header", 1, 1);

  const std::size_t k = columns - 1;
  if (rows.size() < k + 2) {
    throw PreconditionError("need at least k+2 = " + std::to_string(k + 2) + " data rows, got " +
                            std::to_string(rows.size()));
  }
  linalg::VectorXd y(static_cast<Eigen::Index>(rows.size()));
  linalg::MatrixXd regressors(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    y(r) = rows[i][0];
    for (std::size_t c = 0; c < k; ++c) regressors(r, static_cast<Eigen::Index>(c)) = rows[i][c + 1];
  }
  for (Eigen::Index c = 0; c < regressors.cols(); ++c) {
    if ((regressors.col(c).array() == regressors(0, c)).all()) {
      throw DegenerateRegressorsError("regressor column " + std::to_string(c + 2) + " is constant");
    }
  }
  return linalg::RegressionData::with_intercept(std::move(y), regressors);
}

linalg::RegressionData ingest_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

std::string format_csv(const linalg::RegressionData& data) {
  std::string out = "y";
  for (std::size_t j = 1; j <= data.k(); ++j) out += ",x" + std::to_string(j);
  out += '\n';
  char cell[40];
  for (Eigen::Index i = 0; i < data.X().rows(); ++i) {
    std::snprintf(cell, sizeof cell, "%.17g", data.y()(i));
    out += cell;
    for (Eigen::Index j = 1; j < data.X().cols(); ++j) {
      std::snprintf(cell, sizeof cell, ",%.17g", data.X()(i, j));
      out += cell;
    }
    out += '\n';
  }
  return out;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace trobust::io
