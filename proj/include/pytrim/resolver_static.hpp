#pragma once

#include "pytrim/model.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pytrim {

enum class ParseStatus { Parsed, PartiallyParsed, Dynamic, Failed };

std::string_view to_string(ParseStatus status);

struct ConfigFile {
  std::string path; ///< relative to the project root
  FileKind file_kind = FileKind::Requirements;
  ParseStatus parse_status = ParseStatus::Parsed;
  /// Reached only through a reference from setup.py or a `file:` directive.
  /// Its entries are removable but do not count as static declarations.
  bool auxiliary = false;
  std::vector<RequirementSpec> specs;
  int dynamic_anchor_line = 0;
};

struct DiscoveryOptions {
  std::vector<std::string> exclude_globs;
};

struct Discovery {
  std::filesystem::path root;
  std::vector<ConfigFile> config_files;
  std::vector<std::string> lock_files;
  std::vector<std::string> mention_files;
  std::vector<std::string> python_sources;
  std::vector<std::string> warnings;
  std::optional<PackageName> project_name;

  const ConfigFile *find(std::string_view path) const;
};

/// Walks the tree and parses every configuration file it finds. Parse
/// failures degrade to warnings. Throws NotADirectory.
Discovery discover_config_files(const std::filesystem::path &project_root, const DiscoveryOptions &options = {});

struct LogicalLine {
  int first_line = 1; ///< 1-based
  int last_line = 1;
  std::string text;   ///< continuation-joined, comment still present
};

/// pip-compatible joining of backslash continuations.
std::vector<LogicalLine> requirement_logical_lines(std::string_view content);

/// `-r` / `--requirement` targets named on an option line, if any.
std::optional<std::string> requirement_include(std::string_view line);

std::vector<RequirementSpec> parse_requirements_file(std::string_view content, const std::string &path,
                                                     std::vector<std::string> *warnings = nullptr);

/// Throws TomlSyntaxError.
std::vector<RequirementSpec> parse_pyproject(std::string_view content, const std::string &path = "pyproject.toml",
                                             std::vector<std::string> *warnings = nullptr);

/// Throws IniSyntaxError.
std::vector<RequirementSpec> parse_setup_cfg(std::string_view content, const std::string &path = "setup.cfg",
                                             std::vector<std::string> *warnings = nullptr);

struct SetupPyResult {
  std::vector<RequirementSpec> specs;
  bool dynamic = false;
  bool failed = false;
  int anchor_line = 0;
  std::string project_name;
  std::vector<std::string> referenced_files;
};

SetupPyResult parse_setup_py_static(std::string_view content, const std::string &path = "setup.py",
                                    std::vector<std::string> *warnings = nullptr);

/// Package part of a conda spec such as `conda-forge::numpy>=1.2`.
std::string conda_package_name(std::string_view entry);

/// Conda-style environment file. Throws YamlSyntaxError.
std::vector<RequirementSpec> parse_environment_yaml(std::string_view content, const std::string &path,
                                                    std::vector<std::string> *warnings = nullptr);

struct Declaration {
  PackageName name;
  std::vector<SourceLocation> locations;
};

struct StaticResolution {
  /// Declared by non-auxiliary files. Keyed by normalized name.
  std::map<std::string, Declaration> dependencies;
  /// Every removable declaration, auxiliary files included.
  std::map<std::string, Declaration> declarations;
  bool has_dynamic_setup = false;
};

StaticResolution static_dependency_set(const Discovery &discovery);

} // namespace pytrim
