#pragma once

#include "pytrim/error.hpp"

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pytrim {

enum class FileKind {
  Requirements,
  PyProjectToml,
  SetupPy,
  SetupCfg,
  YamlEnv,
  PythonSource,
  Unmodifiable,
};

std::string_view to_string(FileKind kind);

struct SourceLocation {
  std::string file_path; ///< relative to the project root, generic separators
  int line = 1;          ///< 1-based
  FileKind file_kind = FileKind::Requirements;
  std::string detail;    ///< table path, extras group or similar context

  bool operator==(const SourceLocation &) const = default;
  auto operator<=>(const SourceLocation &) const = default;
};

/// Distribution identity. Equality and ordering use the normalized form only.
class PackageName {
public:
  PackageName() = default;

  const std::string &raw() const noexcept { return raw_; }
  const std::string &normalized() const noexcept { return normalized_; }

  /// Normalized name with `-` replaced by `_`, the usual import-name guess.
  std::string module_guess() const;

  bool operator==(const PackageName &other) const noexcept {
    return normalized_ == other.normalized_;
  }
  std::strong_ordering operator<=>(const PackageName &other) const noexcept {
    return normalized_ <=> other.normalized_;
  }

private:
  friend PackageName normalize_name(std::string_view raw);

  std::string raw_;
  std::string normalized_;
};

/// Lowercases and collapses every run of `-`, `_`, `.` into one `-`.
/// Throws EmptyName for blank input and InvalidName when the trimmed input
/// has characters outside [A-Za-z0-9._-] or does not start and end with an
/// alphanumeric.
PackageName normalize_name(std::string_view raw);

struct RequirementSpec {
  PackageName name;
  std::set<std::string> extras;
  std::string version_constraint; ///< verbatim; `@ url` for direct references
  std::optional<std::string> marker;
  SourceLocation location;

  /// Identity comparison ignoring where the spec was read from.
  bool same_requirement(const RequirementSpec &other) const;
};

/// Renders the spec back to a single requirement line.
std::string serialize(const RequirementSpec &spec);

/// Returns nullopt for blank, comment and option lines. Throws
/// MalformedRequirement when the name segment is not a valid name.
std::optional<RequirementSpec> parse_requirement_line(std::string_view line);

/// Strips a pip-style trailing comment: `#` at line start or after whitespace.
std::string_view strip_requirement_comment(std::string_view line);

enum class ImportKind { Plain, FromImport, DynamicLiteral, DunderImport };

std::string_view to_string(ImportKind kind);

struct ImportBinding {
  std::string module_path;
  std::string top_level;
  ImportKind kind = ImportKind::Plain;
  SourceLocation location;
  std::vector<std::pair<std::string, std::optional<std::string>>> aliased_names;
};

struct DistributionRecord {
  PackageName name;
  std::string version;
  std::vector<RequirementSpec> requires_dist;
  std::set<std::string> import_names;
  std::string origin_url; ///< from direct_url.json when the installer wrote one
};

struct DependencyGraph {
  std::map<std::string, DistributionRecord> nodes; ///< keyed by normalized name
  std::set<std::pair<std::string, std::string>> edges;
  PackageName root;

  std::set<std::string> successors(const std::string &normalized) const;
  std::size_t in_degree(const std::string &normalized) const;
  /// Out-neighbours of the root.
  std::set<PackageName> direct_dependencies() const;
  /// Everything reachable from `from`, excluding `from` unless on a cycle.
  std::set<std::string> reachable_from(const std::string &from) const;
};

struct BloatFinding {
  PackageName package;
  std::vector<SourceLocation> declared_at;
  std::vector<ImportBinding> import_sites;
  std::string detector_id;
  /// Set when the name has no declaration to edit; the finding is reported
  /// but never planned for removal.
  bool report_only = false;
};

struct FileEdit {
  std::string file_path;
  FileKind file_kind = FileKind::Requirements;
  std::string original_content;
  std::string new_content;
  std::set<PackageName> removed_packages;
};

struct ManualFlag {
  SourceLocation location;
  std::string reason;

  bool operator==(const ManualFlag &) const = default;
};

struct EditPlan {
  std::vector<FileEdit> file_edits;
  std::vector<ManualFlag> manual_flags;
  std::vector<std::string> lockfile_warnings;

  bool empty() const {
    return file_edits.empty() && manual_flags.empty() && lockfile_warnings.empty();
  }
};

} // namespace pytrim
