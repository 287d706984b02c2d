#pragma once

#include "pytrim/model.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace pytrim {

struct CommitRef {
  bool created = false;
  std::string branch;
  std::string base_branch;
  std::string commit;
  std::string pr_title;
  std::filesystem::path pr_body_path;
};

/// `pytrim/remove-<names>-<yyyymmdd>` using today's date.
std::string default_branch_name(const std::vector<BloatFinding> &findings);

/// Creates `branch`, writes the plan's edits, stages exactly those files and
/// commits them. The PR body goes to `<root>/.pytrim/pr_body.md`. On any
/// failure the original branch and file contents are restored.
/// Throws NotARepo, DirtyWorktree or VcsCommandFailed.
CommitRef create_branch_commit(const std::filesystem::path &project_root, const EditPlan &plan,
                               const std::string &branch, const std::string &message, const std::string &pr_title,
                               const std::string &pr_body);

} // namespace pytrim
