#pragma once

#include "trobust/linalg.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace trobust::io {

/**
 * Parses regression data from CSV text. The first line is a header, the
 * first column the response and the remaining columns regressors; the
 * intercept column is added here and must not be supplied. Blank lines are
 * skipped. ParseError rows and columns are 1-based file coordinates, the
 * header being row 1.
 */
linalg::RegressionData parse_csv(std::string_view text);

linalg::RegressionData ingest_csv(const std::filesystem::path& path);

/// Header "y,x1,...,xk" and values printed with 17 significant digits, so
/// parse_csv(format_csv(d)) == d.
std::string format_csv(const linalg::RegressionData& data);

void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace trobust::io
