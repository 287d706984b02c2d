#pragma once

#include "pytrim/model.hpp"
#include "pytrim/resolver_static.hpp"

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pytrim {

struct InstallResult {
  std::filesystem::path target_dir;
  bool succeeded = false;
  bool timed_out = false;
  std::string installer_stdout;
  std::string installer_stderr;
  std::chrono::duration<double> duration{0};
};

struct InstallerConfig {
  /// Command prefix, e.g. {"pip"} or {"python3", "-m", "pip"}.
  std::vector<std::string> command = {"pip"};
  std::chrono::duration<double> timeout = std::chrono::seconds(600);
};

/// Splits a configured installer string on whitespace.
InstallerConfig installer_from_string(std::string_view spec);

/// `--installer` value, then PYTRIM_INSTALLER, then `pip`.
InstallerConfig default_installer(const std::optional<std::string> &flag = std::nullopt);

/// Runs `<installer> install -t <target_dir> <project_root>`. Throws
/// InstallerNotFound when the installer executable is not on PATH; a failed
/// or timed-out install is reported through the result.
InstallResult install_isolated(const std::filesystem::path &project_root, const std::filesystem::path &target_dir,
                               const InstallerConfig &installer = {});

struct MetadataHeaders {
  std::vector<std::pair<std::string, std::string>> fields;

  std::optional<std::string> first(std::string_view key) const;
  std::vector<std::string> all(std::string_view key) const;
};

/// Email-header style `Key: value` block up to the first blank line.
MetadataHeaders parse_metadata(std::string_view content);

/// Throws MalformedMetadata when the directory lacks a usable METADATA.
DistributionRecord read_dist_info(const std::filesystem::path &dist_info_dir);

/// Malformed distributions are skipped with a warning.
std::vector<DistributionRecord> scan_dist_infos(const std::filesystem::path &target_dir,
                                                std::vector<std::string> *warnings = nullptr);

/// True when the marker conditions on an extra (`extra == "..."`).
bool marker_mentions_extra(std::string_view marker);

/// Throws MissingRoot / MultipleRoots when no project name is given and the
/// in-degree-0 vertex is not unique.
DependencyGraph build_dependency_graph(const std::vector<DistributionRecord> &records,
                                       const std::optional<PackageName> &project_name = std::nullopt);

enum class Provenance { Static, Dynamic, Both };

std::string_view to_string(Provenance provenance);

struct ResolvedDependency {
  PackageName name;
  Provenance provenance = Provenance::Static;
};

struct DynamicResolution {
  bool attempted = false;
  InstallResult install;
  std::vector<DistributionRecord> records;
  std::optional<DependencyGraph> graph;
  std::vector<std::string> warnings;
};

/// Copies the project to a scratch directory, installs it, scans the
/// result and builds the graph. Never throws for installer failures.
DynamicResolution resolve_dynamic(const Discovery &discovery, const InstallerConfig &installer);

struct Resolution {
  std::map<std::string, ResolvedDependency> dependencies; ///< keyed by normalized name
  std::vector<std::string> warnings;
};

/// Union of the static set and the root's direct dependencies.
Resolution resolve_dependencies(const StaticResolution &static_result, const DynamicResolution *dynamic);

} // namespace pytrim
