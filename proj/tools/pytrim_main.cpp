#include "pytrim/pipeline.hpp"
#include "pytrim/remover.hpp"
#include "pytrim/report.hpp"
#include "pytrim/text.hpp"
#include "pytrim/vcs.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <iostream>
#include <unistd.h>

namespace {

constexpr int kExitClean = 0;
constexpr int kExitFindings = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

bool use_color() {
  const char *no_color = std::getenv("NO_COLOR");
  return ::isatty(STDOUT_FILENO) && !(no_color && *no_color);
}

void print_diff(const std::string &diff, bool color) {
  if (!color) {
    std::cout << diff;
    return;
  }
  for (auto line : pytrim::text::split_lines(diff)) {
    const char *code = nullptr;
    if (line.starts_with("+++") || line.starts_with("---"))
      code = "\033[1m";
    else if (line.starts_with("@@"))
      code = "\033[36m";
    else if (line.starts_with("+"))
      code = "\033[32m";
    else if (line.starts_with("-"))
      code = "\033[31m";
    if (code)
      std::cout << code << pytrim::text::chomp(line) << "\033[0m\n";
    else
      std::cout << line;
  }
}

int run(int argc, char **argv) {
  using namespace pytrim;

  CLI::App app{"Find unused Python dependencies and remove their declarations and imports."};
  app.set_version_flag("--version", "pytrim 0.1.0");

  std::string project;
  std::vector<std::string> remove;
  std::string remove_file;
  bool write = false;
  std::string report;
  std::string branch;
  std::string message;
  bool no_dynamic = false;
  std::string installer;
  double timeout = 600;
  std::vector<std::string> excludes;
  bool exclude_tests = false;

  app.add_option("project", project, "Project root directory")->required();
  app.add_option("--remove", remove, "Packages to remove, skipping detection (comma separated)")->delimiter(',');
  app.add_option("--remove-file", remove_file, "File listing packages to remove, one per line");
  app.add_flag("--write", write, "Apply the edits (default is a dry run)");
  app.add_option("--report", report, "Print a report instead of diffs: md or json");
  auto *branch_opt = app.add_option("--branch", branch, "Commit the edits on a new git branch")->expected(0, 1);
  app.add_option("--message", message, "Commit message for --branch");
  app.add_flag("--no-dynamic", no_dynamic, "Skip the isolated install");
  app.add_option("--installer", installer, "Installer command (default: $PYTRIM_INSTALLER or pip)");
  app.add_option("--timeout", timeout, "Install timeout in seconds")->check(CLI::PositiveNumber);
  app.add_option("--exclude", excludes, "Glob of paths to skip during discovery");
  app.add_flag("--exclude-tests", exclude_tests, "Ignore imports in test files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitClean : kExitUsage;
  }

  std::optional<ReportFormat> format;
  if (report == "md" || report == "markdown")
    format = ReportFormat::Markdown;
  else if (report == "json")
    format = ReportFormat::Json;
  else if (!report.empty()) {
    std::cerr << "pytrim: --report must be md or json\n";
    return kExitUsage;
  }

  PipelineOptions options;
  options.project_root = project;
  options.dynamic = !no_dynamic;
  options.installer = default_installer(installer.empty() ? std::nullopt : std::optional<std::string>(installer));
  options.installer.timeout = std::chrono::duration<double>(timeout);
  options.exclude_globs = excludes;
  options.scan_tests = !exclude_tests;
  if (!remove.empty() || !remove_file.empty()) {
    std::vector<std::string> names;
    for (const auto &r : remove) {
      const auto t = text::trim(r);
      if (!t.empty())
        names.emplace_back(t);
    }
    if (!remove_file.empty()) {
      try {
        const auto listed = read_package_list(text::read_file(remove_file));
        names.insert(names.end(), listed.begin(), listed.end());
      } catch (const Error &e) {
        std::cerr << "pytrim: " << e.what() << "\n";
        return kExitUsage;
      }
    }
    if (names.empty()) {
      std::cerr << "pytrim: no package names given to remove\n";
      return kExitUsage;
    }
    for (const auto &n : names) {
      try {
        normalize_name(n);
      } catch (const Error &e) {
        std::cerr << "pytrim: " << e.what() << "\n";
        return kExitUsage;
      }
    }
    options.remove = std::move(names);
  }

  PipelineResult result;
  try {
    result = run_pipeline(options);
  } catch (const Error &e) {
    if (e.kind() == ErrorKind::NotADirectory) {
      std::cerr << "pytrim: " << e.what() << "\n";
      return kExitUsage;
    }
    throw;
  }

  for (const auto &w : result.warnings)
    std::cerr << "warning: " << w << "\n";

  const auto diffs = apply_edits(result.discovery.root, result.plan, ApplyMode::DryRun);
  if (format) {
    std::cout << render_report(result.report_input(), *format);
  } else if (result.findings.empty()) {
    std::cout << "no unused dependencies found\n";
  } else {
    const bool color = use_color();
    for (const auto &d : diffs)
      print_diff(d, color);
  }

  for (const auto &f : result.findings) {
    std::cerr << "unused: " << f.package.raw() << " (" << f.declared_at.size() << " declaration"
              << (f.declared_at.size() == 1 ? "" : "s") << (f.report_only ? ", report only" : "") << ")\n";
  }
  for (const auto &flag : result.plan.manual_flags) {
    std::cerr << "manual review: " << flag.location.file_path << ":" << flag.location.line << ": " << flag.reason
              << "\n";
  }
  for (const auto &w : result.plan.lockfile_warnings)
    std::cerr << "warning: " << w << "\n";

  if (branch_opt->count() > 0) {
    const auto name = branch.empty() ? default_branch_name(result.findings) : branch;
    const auto title = pr_title(result.findings);
    try {
      const auto ref = create_branch_commit(result.discovery.root, result.plan, name,
                                            message.empty() ? title : message, title,
                                            render_report(result.report_input(), ReportFormat::Markdown));
      if (ref.created) {
        std::cerr << "committed " << ref.commit.substr(0, 12) << " on branch " << ref.branch << " (from "
                  << ref.base_branch << ")\n"
                  << "pull request body: " << ref.pr_body_path.string() << "\n";
      } else {
        std::cerr << "nothing to commit\n";
      }
    } catch (const Error &e) {
      std::cerr << "pytrim: " << e.what() << "\n";
      return e.kind() == ErrorKind::VcsCommandFailed ? kExitInternal : kExitUsage;
    }
  } else if (write) {
    apply_edits(result.discovery.root, result.plan, ApplyMode::Write);
    if (!result.plan.file_edits.empty())
      std::cerr << "wrote " << result.plan.file_edits.size() << " file(s)\n";
  }

  return result.findings.empty() ? kExitClean : kExitFindings;
}

} // namespace

int main(int argc, char **argv) {
  try {
    return run(argc, argv);
  } catch (const pytrim::Error &e) {
    std::cerr << "pytrim: " << e.what() << "\n";
    return e.kind() == pytrim::ErrorKind::Usage ? kExitUsage : kExitInternal;
  } catch (const std::exception &e) {
    std::cerr << "pytrim: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
