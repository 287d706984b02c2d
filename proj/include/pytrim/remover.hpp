#pragma once

#include "pytrim/model.hpp"
#include "pytrim/resolver_static.hpp"

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace pytrim {

using PackageSet = std::set<PackageName>;

/// Deletes every logical line naming one of `packages`, continuation lines
/// included. All other bytes are kept.
std::string remove_from_requirements(std::string_view content, const PackageSet &packages);

/// Array entries of `project.dependencies` / `project.optional-dependencies`
/// and poetry dependency keys. An emptied optional group is dropped.
/// Throws TomlSyntaxError.
std::string remove_from_toml(std::string_view content, const PackageSet &packages);

/// `install_requires` and `options.extras_require` values; a key left with
/// no value is removed. Throws IniSyntaxError.
std::string remove_from_setup_cfg(std::string_view content, const PackageSet &packages);

/// String literals in the literal dependency lists of `setup()`. An emptied
/// extras group is dropped; an emptied install_requires stays `[]`.
/// Throws PySyntaxError.
std::string remove_from_setup_py(std::string_view content, const PackageSet &packages);

/// Removes `import` / `from ... import` statements whose top-level module is
/// in `import_names`. A block left empty receives `pass`. Throws PySyntaxError.
std::string remove_imports_from_source(std::string_view content, const std::set<std::string> &import_names);

/// Conda environment `dependencies` items and nested `pip` items. Throws
/// YamlSyntaxError for flow-style lists, anchors and aliases.
std::string remove_from_environment_yaml(std::string_view content, const PackageSet &packages);

/// Dispatches on the file kind.
std::string remove_from(FileKind kind, std::string_view content, const PackageSet &packages);

/// Whole-word, case-insensitive mentions of the package in one text.
std::vector<ManualFlag> find_mentions(std::string_view content, const std::string &path, const PackageName &package);

std::vector<ManualFlag> flag_unmodifiable_mentions(const Discovery &project, const PackageName &package);

std::vector<std::string> check_lockfile_sync(const Discovery &project, const EditPlan &plan);

EditPlan plan_removal(const Discovery &project, const std::vector<BloatFinding> &findings);

enum class ApplyMode { DryRun, Write };

/// Returns one unified diff per edit. Write mode checks every file for
/// staleness before writing anything, then replaces files atomically.
/// Throws StaleFile or IoError.
std::vector<std::string> apply_edits(const std::filesystem::path &project_root, const EditPlan &plan, ApplyMode mode);

} // namespace pytrim
