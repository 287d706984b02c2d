#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pytrim::eval {

struct ReplicationCase {
  std::string case_id;
  std::filesystem::path pre_tree;
  std::filesystem::path post_tree;
  std::vector<std::string> removed_packages;
  std::vector<std::string> excluded_files;
};

/// Reads `<dir>/case.json` (`{"removed": [...], "excluded": [...]}`) and
/// checks that `pre/` and `post/` exist. Throws CaseSetupError.
ReplicationCase load_case(const std::filesystem::path &case_dir);

/// Every subdirectory holding a case.json, ordered by name.
std::vector<ReplicationCase> load_cases(const std::filesystem::path &cases_dir);

struct ReplicationResult {
  std::string case_id;
  int changed_files = 0;
  int excluded_files = 0;
  int relevant_files = 0;
  int matched = 0;
  std::vector<std::pair<std::string, std::string>> mismatched; ///< path, diff
  std::chrono::duration<double> duration{0};

  std::optional<double> accuracy() const;
};

/// Runs removal-only mode on a scratch copy of pre_tree and compares every
/// file the developer changed (minus exclusions) against post_tree.
ReplicationResult replicate(const ReplicationCase &c);

/// Compares two versions of `path` ignoring whitespace and comments, using
/// the parser that matches the file name. Symmetric.
bool semantically_equal(const std::string &path, std::string_view a, std::string_view b);

struct Summary {
  int cases = 0;
  int changed_files = 0;
  int excluded_files = 0;
  int relevant_files = 0;
  int matched = 0;
  int mismatched = 0;
  std::chrono::duration<double> duration{0};

  std::optional<double> accuracy() const;
};

Summary summarize(const std::vector<ReplicationResult> &results);

/// "98.33%" or "N/A".
std::string format_accuracy(std::optional<double> accuracy);

std::string render_summary_markdown(const Summary &summary, const std::vector<ReplicationResult> &results);
std::string render_summary_json(const Summary &summary, const std::vector<ReplicationResult> &results);

} // namespace pytrim::eval
