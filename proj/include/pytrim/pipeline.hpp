#pragma once

#include "pytrim/detector.hpp"
#include "pytrim/model.hpp"
#include "pytrim/remover.hpp"
#include "pytrim/report.hpp"
#include "pytrim/resolver_dynamic.hpp"
#include "pytrim/resolver_static.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pytrim {

struct PipelineOptions {
  std::filesystem::path project_root;
  /// Removal-only mode: operator-supplied unused packages, detection skipped.
  std::optional<std::vector<std::string>> remove;
  bool dynamic = true;
  InstallerConfig installer;
  std::vector<std::string> exclude_globs;
  bool scan_tests = true;
};

struct PipelineResult {
  Discovery discovery;
  StaticResolution static_result;
  DynamicResolution dynamic;
  Resolution resolution;
  std::vector<ImportBinding> bindings;
  std::vector<BloatFinding> findings;
  EditPlan plan;
  std::vector<std::string> warnings;

  ReportInput report_input() const;
};

/// True for files under a `test`/`tests` directory or named `test_*.py` /
/// `*_test.py` / `conftest.py`.
bool is_test_path(const std::string &relative_path);

/// Discovery, resolution, detection (or external findings) and planning.
/// Nothing is written. Throws NotADirectory.
PipelineResult run_pipeline(const PipelineOptions &options);

} // namespace pytrim
