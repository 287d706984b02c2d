#pragma once

#include "pytrim/model.hpp"
#include "pytrim/resolver_dynamic.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace pytrim {

enum class ReportFormat { Markdown, Json };

inline constexpr std::string_view kReportSchemaVersion = "1";

struct ReportInput {
  std::string project;
  std::vector<BloatFinding> findings;
  EditPlan plan;
  std::map<std::string, Provenance> provenance; ///< keyed by normalized name
  std::vector<std::string> warnings;
};

/// Deterministic: identical inputs render byte-identical output.
std::string render_report(const ReportInput &input, ReportFormat format);

/// "Remove unused dependencies: a, b"
std::string pr_title(const std::vector<BloatFinding> &findings);

} // namespace pytrim
