#pragma once

#include "pytrim/resolver_dynamic.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace fixture {

using Tree = std::map<std::string, std::string>;

void write_tree(const std::filesystem::path &root, const Tree &tree);
/// Every regular file under root, keyed by generic relative path.
Tree read_tree(const std::filesystem::path &root);

/// Softlayer project: setup.py, three requirements files declaring
/// prettytable, a README.rst that mentions it, sources that do not import it.
Tree softlayer();
/// Optimizely project: setup.py builds install_requires from reqs/core.txt.
Tree optimizely();
/// Everything declared is imported.
Tree clean_project();

std::filesystem::path source_dir();
std::filesystem::path cli_path();
std::filesystem::path eval_cli_path();

/// python3 `ast.parse` verdict, or nullopt when python3 is unavailable.
std::optional<bool> python_parses(const std::string &source);

/// Builds wheels with tests/tools/make_wheel.py; false if python3 is missing.
bool make_wheel(const std::filesystem::path &outdir, const std::string &name, const std::string &version,
                const std::vector<std::string> &requires_dist = {});

/// pip restricted to a local wheel directory, no index, no build isolation.
pytrim::InstallerConfig offline_pip(const std::filesystem::path &wheel_dir);

bool have_offline_pip();

} // namespace fixture
