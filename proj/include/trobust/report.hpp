#pragma once

#include "trobust/diagnostics.hpp"
#include "trobust/grid.hpp"
#include "trobust/limit_lab.hpp"
#include "trobust/posterior.hpp"
#include "trobust/regvar.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>

namespace trobust::report {

using Json = nlohmann::ordered_json;

/// Number rounded to 12 significant digits; null when not finite.
Json number(double value);

/// Index fields are reported 1-based.
Json to_json(const diagnostics::ConflictDiagnosis& diagnosis);
Json to_json(const posterior::PosteriorSummary& summary);
Json to_json(const regvar::TailIndexEstimate& estimate);
Json to_json(const lab::SweepResult& result);
Json to_json(const linalg::RegressionData& data);

/// Serialized report text: two-space indented, newline terminated.
std::string render(const Json& report);

/// Writes render(report) to `path`; throws IoError when unwritable.
void emit_report(const Json& report, const std::filesystem::path& path);

}  // namespace trobust::report
