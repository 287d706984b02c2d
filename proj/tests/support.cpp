#include "support.hpp"

#include "pytrim/fsutil.hpp"
#include "pytrim/subprocess.hpp"
#include "pytrim/text.hpp"

namespace fs = std::filesystem;

namespace fixture {

void write_tree(const fs::path &root, const Tree &tree) {
  for (const auto &[rel, content] : tree) {
    const auto path = root / rel;
    fs::create_directories(path.parent_path());
    pytrim::text::write_file(path, content);
  }
}

Tree read_tree(const fs::path &root) {
  Tree tree;
  for (const auto &entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file())
      tree[fs::relative(entry.path(), root).generic_string()] = pytrim::text::read_file(entry.path());
  }
  return tree;
}

Tree softlayer() {
  return {
      {"setup.py", "from setuptools import setup, find_packages\n"
                   "\n"
                   "setup(\n"
                   "    name='SoftLayer',\n"
                   "    version='6.2.6',\n"
                   "    packages=find_packages(exclude=['tests']),\n"
                   "    install_requires=[\n"
                   "        'prettytable',\n"
                   "        'click >= 8.0.4',\n"
                   "        'requests >= 2.32.2',\n"
                   "        'urllib3 >= 1.24',\n"
                   "        'rich==14.0.0',\n"
                   "    ],\n"
                   ")\n"},
      {"tools/requirements.txt", "prettytable\nclick >= 8.0.4\nrequests >= 2.32.2\nurllib3 >= 1.24\nrich==14.0.0\n"},
      {"tools/test-requirements.txt",
       "tox\npytest\nprettytable\nclick >= 8.0.4\nrequests >= 2.32.2\nurllib3 >= 1.24\nrich==14.0.0\n"},
      {"docs/requirements.txt", "sphinx==7.2.6\nsphinx-click\nPrettyTable  # table output\nclick\nrich\n"},
      {"README.rst", "SoftLayer API Python Client\n===========================\n\n"
                     "Requirements\n------------\n\n* prettytable >= 0.7.0\n* click >= 8.0.4\n"},
      {"SoftLayer/__init__.py", ""},
      {"SoftLayer/formatting.py", "import click\nimport requests\nimport urllib3\nfrom rich.table import Table\n"},
      {"tests/test_formatting.py", "import pytest\nimport sphinx\nimport sphinx_click\nimport tox\n"},
  };
}

Tree optimizely() {
  return {
      {"setup.py", "import os\n"
                   "\n"
                   "from setuptools import setup, find_packages\n"
                   "\n"
                   "here = os.path.join(os.path.dirname(__file__))\n"
                   "\n"
                   "with open(os.path.join(here, 'reqs', 'core.txt')) as f:\n"
                   "    REQUIREMENTS = f.read().splitlines()\n"
                   "\n"
                   "setup(\n"
                   "    name='optimizely-sdk',\n"
                   "    version='5.2.0',\n"
                   "    packages=find_packages(),\n"
                   "    install_requires=REQUIREMENTS,\n"
                   ")\n"},
      {"reqs/core.txt", "jsonschema>=3.2.0\npyrsistent>=0.16.0\n"},
      {"optimizely/__init__.py", ""},
      {"optimizely/helpers.py", "import jsonschema\n"},
  };
}

Tree clean_project() {
  return {
      {"requirements.txt", "requests>=2\nclick\n"},
      {"app/__init__.py", "import click\nfrom requests import Session\n"},
  };
}

fs::path source_dir() { return PYTRIM_SOURCE_DIR; }
fs::path cli_path() { return PYTRIM_CLI; }
fs::path eval_cli_path() { return PYTRIM_EVAL_CLI; }

std::optional<bool> python_parses(const std::string &source) {
  if (!pytrim::find_executable("python3"))
    return std::nullopt;
  pytrim::TempDir dir("pytrim-ast");
  const auto file = dir.path() / "input.py";
  pytrim::text::write_file(file, source);
  const auto r = pytrim::run_process(
      {"python3", "-c", "import ast, sys; ast.parse(open(sys.argv[1], 'rb').read())", file.string()});
  return r.exit_code == 0;
}

bool make_wheel(const fs::path &outdir, const std::string &name, const std::string &version,
                const std::vector<std::string> &requires_dist) {
  if (!pytrim::find_executable("python3"))
    return false;
  std::vector<std::string> argv = {"python3", (source_dir() / "tests/tools/make_wheel.py").string(), outdir.string(),
                                   name, version};
  argv.insert(argv.end(), requires_dist.begin(), requires_dist.end());
  return pytrim::run_process(argv).exit_code == 0;
}

pytrim::InstallerConfig offline_pip(const fs::path &wheel_dir) {
  pytrim::InstallerConfig config;
  config.command = {"env",
                    "PIP_NO_INDEX=1",
                    "PIP_FIND_LINKS=" + wheel_dir.string(),
                    "PIP_NO_BUILD_ISOLATION=0",
                    "PIP_DISABLE_PIP_VERSION_CHECK=1",
                    "PIP_ROOT_USER_ACTION=ignore",
                    "python3",
                    "-m",
                    "pip"};
  config.timeout = std::chrono::seconds(300);
  return config;
}

bool have_offline_pip() {
  if (!pytrim::find_executable("python3"))
    return false;
  return pytrim::run_process({"python3", "-c", "import setuptools, pip"}).exit_code == 0;
}

} // namespace fixture
