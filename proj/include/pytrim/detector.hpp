#pragma once

#include "pytrim/model.hpp"
#include "pytrim/resolver_dynamic.hpp"
#include "pytrim/resolver_static.hpp"

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace pytrim {

/// Import bindings of one Python source. Relative imports are skipped.
/// Throws PySyntaxError.
std::vector<ImportBinding> scan_source(std::string_view content, const std::string &path);

/// Scans files relative to `root`; unparseable files are skipped with a warning.
std::vector<ImportBinding> scan_imports(const std::filesystem::path &root, const std::vector<std::string> &files,
                                        std::vector<std::string> *warnings = nullptr);

/// Import names a distribution provides: its dist-info record when known,
/// then a table of well-known mismatches, then the `-` to `_` guess.
std::set<std::string> map_package_to_imports(const PackageName &package,
                                             const std::vector<DistributionRecord> *dist_records = nullptr);

struct DetectorInput {
  std::vector<Declaration> dependencies;
  const std::vector<DistributionRecord> *dist_records = nullptr;
  std::vector<ImportBinding> bindings;
};

/// Declared or resolved dependencies with no import binding, ordered by
/// normalized name.
std::vector<BloatFinding> detect_unused(const DetectorInput &input);

/// Parses a newline-delimited package list; `#` comments and blanks ignored.
std::vector<std::string> read_package_list(std::string_view content);

/// Binds operator-supplied names to their declaration locations. Names
/// without declarations become report-only findings with a warning.
std::vector<BloatFinding> load_external_findings(const std::vector<std::string> &packages,
                                                 const StaticResolution &static_result,
                                                 const std::vector<ImportBinding> &bindings,
                                                 const std::vector<DistributionRecord> *dist_records = nullptr,
                                                 std::vector<std::string> *warnings = nullptr);

} // namespace pytrim
