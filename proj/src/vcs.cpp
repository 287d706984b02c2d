#include "pytrim/vcs.hpp"

#include "pytrim/remover.hpp"
#include "pytrim/subprocess.hpp"
#include "pytrim/text.hpp"

#include <chrono>
#include <ctime>

namespace pytrim {

namespace fs = std::filesystem;

namespace {

class Git {
public:
  explicit Git(fs::path root) : root_(std::move(root)) {
    if (!find_executable("git"))
      fail(ErrorKind::VcsCommandFailed, "git not found on PATH");
  }

  ProcessResult run(std::vector<std::string> args) const {
    std::vector<std::string> argv = {"git", "-C", root_.string()};
    argv.insert(argv.end(), identity_.begin(), identity_.end());
    argv.insert(argv.end(), args.begin(), args.end());
    return run_process(argv);
  }

  std::string check(std::vector<std::string> args) const {
    auto r = run(args);
    if (r.exit_code != 0)
      fail(ErrorKind::VcsCommandFailed, "git " + args.front() + " failed: " + std::string(text::trim(r.err)));
    return std::string(text::trim(r.out));
  }

  void ensure_identity() {
    if (!text::trim(run({"config", "user.email"}).out).empty())
      return;
    identity_ = {"-c", "user.name=pytrim", "-c", "user.email=pytrim@localhost"};
  }

private:
  fs::path root_;
  std::vector<std::string> identity_;
};

std::string today() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  ::localtime_r(&now, &tm);
  char buf[16];
  std::strftime(buf, sizeof buf, "%Y%m%d", &tm);
  return buf;
}

} // namespace

std::string default_branch_name(const std::vector<BloatFinding> &findings) {
  std::vector<std::string> names;
  for (const auto &f : findings) {
    if (!f.report_only)
      names.push_back(f.package.normalized());
  }
  std::string joined = text::join(names, "-");
  if (joined.size() > 60)
    joined = joined.substr(0, 60);
  while (!joined.empty() && joined.back() == '-')
    joined.pop_back();
  return "pytrim/remove-" + (joined.empty() ? std::string("unused") : joined) + "-" + today();
}

CommitRef create_branch_commit(const fs::path &project_root, const EditPlan &plan, const std::string &branch,
                               const std::string &message, const std::string &title, const std::string &pr_body) {
  CommitRef ref;
  if (plan.file_edits.empty())
    return ref;

  Git git(project_root);
  if (git.run({"rev-parse", "--is-inside-work-tree"}).exit_code != 0)
    fail(ErrorKind::NotARepo, project_root.string() + " is not a git working tree");

  std::vector<std::string> paths;
  for (const auto &e : plan.file_edits)
    paths.push_back(e.file_path);

  std::vector<std::string> status_args = {"status", "--porcelain", "--"};
  status_args.insert(status_args.end(), paths.begin(), paths.end());
  const auto dirty = git.check(status_args);
  if (!dirty.empty())
    fail(ErrorKind::DirtyWorktree, "uncommitted changes in affected files:\n" + dirty);

  git.ensure_identity();
  ref.base_branch = git.check({"rev-parse", "--abbrev-ref", "HEAD"});
  git.check({"checkout", "-b", branch});
  ref.branch = branch;

  try {
    apply_edits(project_root, plan, ApplyMode::Write);
    std::vector<std::string> add = {"add", "--"};
    add.insert(add.end(), paths.begin(), paths.end());
    git.check(add);
    std::vector<std::string> commit = {"commit", "-q", "-m", message, "--"};
    commit.insert(commit.end(), paths.begin(), paths.end());
    git.check(commit);
    ref.commit = git.check({"rev-parse", "HEAD"});
  } catch (const Error &) {
    for (const auto &e : plan.file_edits) {
      try {
        text::write_file(project_root / e.file_path, e.original_content);
      } catch (const Error &) {
      }
    }
    std::vector<std::string> reset = {"reset", "-q", "--"};
    reset.insert(reset.end(), paths.begin(), paths.end());
    git.run(reset);
    git.run({"checkout", "-q", ref.base_branch});
    git.run({"branch", "-D", branch});
    throw;
  }

  ref.created = true;
  ref.pr_title = title;
  ref.pr_body_path = project_root / ".pytrim" / "pr_body.md";
  std::error_code ec;
  fs::create_directories(ref.pr_body_path.parent_path(), ec);
  text::write_file(ref.pr_body_path, "# " + title + "\n\n" + pr_body);
  return ref;
}

} // namespace pytrim
