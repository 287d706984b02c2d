#include "doctest.h"
#include "support.hpp"

#include "pytrim/fsutil.hpp"
#include "pytrim/resolver_static.hpp"
#include "pytrim/text.hpp"

#include <random>

using namespace pytrim;

namespace {

std::vector<std::string> names(const std::vector<RequirementSpec> &specs) {
  std::vector<std::string> out;
  for (const auto &s : specs)
    out.push_back(s.name.normalized());
  return out;
}

std::vector<std::string> config_paths(const Discovery &d) {
  std::vector<std::string> out;
  for (const auto &cf : d.config_files)
    out.push_back(cf.path);
  return out;
}

} // namespace

TEST_CASE("discovery: softlayer files and kinds") {
  TempDir dir;
  fixture::write_tree(dir.path(), fixture::softlayer());
  const auto d = discover_config_files(dir.path());
  CHECK(config_paths(d) ==
        std::vector<std::string>{"docs/requirements.txt", "setup.py", "tools/requirements.txt",
                                 "tools/test-requirements.txt"});
  CHECK(d.find("setup.py")->file_kind == FileKind::SetupPy);
  CHECK(d.find("tools/requirements.txt")->file_kind == FileKind::Requirements);
  CHECK(d.mention_files == std::vector<std::string>{"README.rst"});
  CHECK(d.project_name->normalized() == "softlayer");
  CHECK(d.python_sources.size() == 4);
}

TEST_CASE("discovery: empty directory and bad root") {
  TempDir dir;
  const auto d = discover_config_files(dir.path());
  CHECK(d.config_files.empty());
  CHECK(d.lock_files.empty());
  try {
    discover_config_files(dir.path() / "missing");
    FAIL("expected NotADirectory");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::NotADirectory);
  }
  text::write_file(dir.path() / "file.txt", "x");
  CHECK_THROWS_AS(discover_config_files(dir.path() / "file.txt"), Error);
}

TEST_CASE("discovery: -r include outside the glob set") {
  TempDir dir;
  fixture::write_tree(dir.path(), {{"requirements.txt", "-r reqs/core.txt\nflask\n"}, {"reqs/core.txt", "rich\n"}});
  const auto d = discover_config_files(dir.path());
  CHECK(config_paths(d) == std::vector<std::string>{"reqs/core.txt", "requirements.txt"});
  CHECK(names(d.find("reqs/core.txt")->specs) == std::vector<std::string>{"rich"});
}

TEST_CASE("discovery: vendored directories, locks, mentions and excludes") {
  TempDir dir;
  fixture::write_tree(dir.path(), {
                                      {"requirements.txt", "a\n"},
                                      {"requirements-dev.in", "b\n"},
                                      {"MANIFEST.in", "include README.md\n"},
                                      {".venv/requirements.txt", "x\n"},
                                      {"venv/lib/requirements.txt", "x\n"},
                                      {"node_modules/requirements.txt", "x\n"},
                                      {"build/requirements.txt", "x\n"},
                                      {"myenv/pyvenv.cfg", "home = /usr\n"},
                                      {"myenv/requirements.txt", "x\n"},
                                      {"pkg.egg-info/requires.txt", "x\n"},
                                      {"environment.yml", "dependencies:\n  - numpy\n"},
                                      {"poetry.lock", ""},
                                      {"Pipfile.lock", "{}"},
                                      {"Dockerfile.dev", "RUN pip install a\n"},
                                      {"scripts/setup.sh", "pip install a\n"},
                                      {"docs/index.md", "a\n"},
                                      {"sub/pyproject.toml", "[project]\nname='n'\ndependencies=['q']\n"},
                                      {"vendorlib/requirements.txt", "v\n"},
                                  });
  const auto d = discover_config_files(dir.path(), {{"vendorlib/*"}});
  CHECK(config_paths(d) == std::vector<std::string>{"environment.yml", "requirements-dev.in", "requirements.txt"});
  CHECK(d.lock_files == std::vector<std::string>{"Pipfile.lock", "poetry.lock"});
  CHECK(d.mention_files == std::vector<std::string>{"Dockerfile.dev", "docs/index.md", "scripts/setup.sh"});
  CHECK(d.find("environment.yml")->file_kind == FileKind::YamlEnv);
}

TEST_CASE("discovery is deterministic") {
  TempDir dir;
  fixture::write_tree(dir.path(), fixture::softlayer());
  const auto a = discover_config_files(dir.path());
  const auto b = discover_config_files(dir.path());
  CHECK(config_paths(a) == config_paths(b));
  CHECK(a.mention_files == b.mention_files);
  CHECK(a.python_sources == b.python_sources);
}

TEST_CASE("parse_requirements_file: tools requirements and continuations") {
  const auto tools_reqs = parse_requirements_file("prettytable\nclick >= 8.0.4\nrich==14.0.0\n", "tools/requirements.txt");
  CHECK(names(tools_reqs) == std::vector<std::string>{"prettytable", "click", "rich"});
  CHECK(tools_reqs[2].version_constraint == "==14.0.0");
  CHECK(tools_reqs[2].location.line == 3);
  CHECK(tools_reqs[2].location.file_path == "tools/requirements.txt");
  CHECK(parse_requirements_file("", "r.txt").empty());

  // pip's parse_requirements joins this to "foo  ==1.2" from line 1.
  const auto joined = parse_requirements_file("foo \\\n ==1.2\n", "r.txt");
  REQUIRE(joined.size() == 1);
  CHECK(joined[0].name.normalized() == "foo");
  CHECK(joined[0].version_constraint == "==1.2");
  CHECK(joined[0].location.line == 1);

  const auto mixed = parse_requirements_file(
      "# c\n--index-url x\n-e .\n-r other.txt\npkg[extra]==1.0  # pinned\nhttps://x/y.whl\nok ; os_name=='nt'\n", "r.txt");
  CHECK(names(mixed) == std::vector<std::string>{"pkg", "ok"});
  CHECK(mixed[0].location.line == 5);
}

TEST_CASE("requirement_logical_lines and includes") {
  const auto lines = requirement_logical_lines("a \\\nb\nc\\\n");
  REQUIRE(lines.size() == 2);
  CHECK(lines[0].first_line == 1);
  CHECK(lines[0].last_line == 2);
  CHECK(lines[0].text == "a b");
  CHECK(lines[1].first_line == 3);
  CHECK(requirement_include("-r base.txt") == std::optional<std::string>("base.txt"));
  CHECK(requirement_include("--requirement=base.txt") == std::optional<std::string>("base.txt"));
  CHECK(requirement_include("-rbase.txt") == std::optional<std::string>("base.txt"));
  CHECK_FALSE(requirement_include("-c constraints.txt"));
}

TEST_CASE("parse_pyproject") {
  const auto pep621 = parse_pyproject("[project]\ndependencies=[\"rich==14.0.0\"]\n");
  REQUIRE(pep621.size() == 1);
  CHECK(serialize(pep621[0]) == "rich==14.0.0");
  CHECK(pep621[0].location.detail == "project.dependencies");
  CHECK(parse_pyproject("[build-system]\nrequires = [\"setuptools\"]\n").empty());

  const auto poetry = parse_pyproject("[tool.poetry.dependencies]\nrich = \"^14.0\"\npython = \"^3.9\"\n");
  CHECK(names(poetry) == std::vector<std::string>{"rich"});

  const auto groups = parse_pyproject("[project.optional-dependencies]\ndocs = [\"sphinx\"]\n"
                                      "[tool.poetry.dev-dependencies]\nblack = \"*\"\n"
                                      "[tool.poetry.group.test.dependencies]\npytest = \"^7\"\n");
  CHECK(names(groups) == std::vector<std::string>{"sphinx", "black", "pytest"});
  CHECK(groups[0].location.detail == "project.optional-dependencies.docs");
  CHECK(groups[0].location.line == 2);
  CHECK(groups[2].location.line == 6);

  CHECK_THROWS_AS(parse_pyproject("[project\n"), Error);
}

TEST_CASE("parse_setup_cfg") {
  const auto one = parse_setup_cfg("[options]\ninstall_requires =\n    rich==14.0.0\n");
  REQUIRE(one.size() == 1);
  CHECK(serialize(one[0]) == "rich==14.0.0");
  CHECK(one[0].location.line == 3);
  CHECK(parse_setup_cfg("[metadata]\nname = x\n").empty());

  const auto extras = parse_setup_cfg("[options.extras_require]\ndocs =\n    sphinx\ntest = pytest, mock\n");
  CHECK(names(extras) == std::vector<std::string>{"sphinx", "pytest", "mock"});
  CHECK(extras[0].location.detail == "options.extras_require.docs");
  CHECK(extras[2].location.detail == "options.extras_require.test");

  std::vector<std::string> warnings;
  const auto file_ref = parse_setup_cfg("[options]\ninstall_requires = file: requirements.in\n", "setup.cfg", &warnings);
  CHECK(file_ref.empty());
}

TEST_CASE("parse_setup_py_static: softlayer and optimizely") {
  const auto softlayer_setup = parse_setup_py_static(fixture::softlayer().at("setup.py"));
  CHECK(names(softlayer_setup.specs) == std::vector<std::string>{"prettytable", "click", "requests", "urllib3", "rich"});
  CHECK_FALSE(softlayer_setup.dynamic);
  CHECK(softlayer_setup.project_name == "SoftLayer");
  CHECK(softlayer_setup.specs[0].location.line == 8);
  CHECK(softlayer_setup.specs[0].location.detail == "install_requires");

  const auto optimizely_setup = parse_setup_py_static(fixture::optimizely().at("setup.py"));
  CHECK(optimizely_setup.specs.empty());
  CHECK(optimizely_setup.dynamic);
  CHECK(optimizely_setup.anchor_line == 14);
  CHECK(optimizely_setup.referenced_files == std::vector<std::string>{"reqs/core.txt"});

  const auto plain = parse_setup_py_static("from setuptools import setup\nsetup(name='x')\n");
  CHECK(plain.specs.empty());
  CHECK_FALSE(plain.dynamic);

  const auto broken = parse_setup_py_static("setup(install_requires=['a'\n");
  CHECK(broken.failed);
}

TEST_CASE("parse_setup_py_static is exact on pure literals") {
  std::mt19937 rng(5);
  const std::vector<std::string> pool = {"rich==14.0.0", "prettytable", "click>=7", "requests[socks]",
                                         "pyjwt[crypto]>=2.0 ; python_version>='3.8'", "Flask_Login",
                                         "zope.interface", "numpy<2"};
  for (int round = 0; round < 200; ++round) {
    std::vector<std::string> chosen;
    for (const auto &p : pool) {
      if (rng() % 2)
        chosen.push_back(p);
    }
    std::string src = "from setuptools import setup\nsetup(\n    name='gen',\n    install_requires=[";
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      const char quote = (rng() % 2 && chosen[i].find('\'') == std::string::npos) ? '\'' : '"';
      src += (rng() % 2 ? "\n        " : " ");
      src += quote + chosen[i] + quote + ",";
    }
    src += "\n    ],\n)\n";
    CAPTURE(src);
    const auto result = parse_setup_py_static(src);
    CHECK_FALSE(result.dynamic);
    REQUIRE(result.specs.size() == chosen.size());
    for (std::size_t i = 0; i < chosen.size(); ++i)
      CHECK(result.specs[i].same_requirement(*parse_requirement_line(chosen[i])));
  }
}

TEST_CASE("parse_environment_yaml") {
  const auto specs = parse_environment_yaml("name: x\ndependencies:\n  - python=3.11\n  - conda-forge::numpy>=1.2\n"
                                            "  - pip\n  - pip:\n      - rich==14.0.0\n",
                                            "environment.yml");
  CHECK(names(specs) == std::vector<std::string>{"numpy", "rich"});
  CHECK(specs[0].location.detail == "dependencies");
  CHECK(specs[1].location.detail == "dependencies.pip");
  CHECK(specs[1].location.line == 7);
  CHECK(conda_package_name("conda-forge::numpy>=1.2") == "numpy");
  CHECK(conda_package_name("scipy=1.11=py311h") == "scipy");
  CHECK_THROWS_AS(parse_environment_yaml("dependencies: [a, \n", "e.yml"), Error);
}

TEST_CASE("static_dependency_set: softlayer aggregates four locations") {
  TempDir dir;
  fixture::write_tree(dir.path(), fixture::softlayer());
  const auto d = discover_config_files(dir.path());
  const auto s = static_dependency_set(d);
  REQUIRE(s.dependencies.count("prettytable") == 1);
  const auto &locations = s.dependencies.at("prettytable").locations;
  CHECK(locations.size() == 4);
  CHECK(s.dependencies.count("softlayer") == 0);
  CHECK_FALSE(s.has_dynamic_setup);
}

TEST_CASE("static_dependency_set: name variants collapse") {
  TempDir dir;
  fixture::write_tree(dir.path(), {{"requirements.txt", "PyYAML>=6\n"}, {"requirements-dev.txt", "pyyaml\n"}});
  const auto s = static_dependency_set(discover_config_files(dir.path()));
  REQUIRE(s.dependencies.size() == 1);
  CHECK(s.dependencies.at("pyyaml").locations.size() == 2);
}

TEST_CASE("static_dependency_set: optimizely static set is empty") {
  TempDir dir;
  fixture::write_tree(dir.path(), fixture::optimizely());
  const auto d = discover_config_files(dir.path());
  const auto s = static_dependency_set(d);
  CHECK(s.dependencies.empty());
  CHECK(s.has_dynamic_setup);
  const auto *core = d.find("reqs/core.txt");
  REQUIRE(core);
  CHECK(core->auxiliary);
  CHECK(s.declarations.count("pyrsistent") == 1);
  CHECK(d.find("setup.py")->parse_status == ParseStatus::Dynamic);
  CHECK(d.find("setup.py")->dynamic_anchor_line == 14);
}

TEST_CASE("every extracted spec points at a line naming it") {
  TempDir dir;
  auto tree = fixture::softlayer();
  tree["pyproject.toml"] = "[project]\nname = \"softlayer\"\ndependencies = [\n  \"Rich>=13\",\n  'click'\n]\n"
                           "[project.optional-dependencies]\ndocs = [\"sphinx\", \"sphinx-click\"]\n"
                           "[tool.poetry.group.dev.dependencies]\npytest = \"*\"\n";
  tree["setup.cfg"] = "[options]\ninstall_requires =\n    requests\n    Flask_Login\n[options.extras_require]\nx = a, b\n";
  tree["environment.yml"] = "dependencies:\n  - numpy=1.26\n  - pip:\n    - tqdm\n";
  fixture::write_tree(dir.path(), tree);
  const auto d = discover_config_files(dir.path());
  int checked = 0;
  for (const auto &cf : d.config_files) {
    const auto content = text::read_file(dir.path() / cf.path);
    const auto lines = text::split_lines(content);
    for (const auto &spec : cf.specs) {
      CAPTURE(cf.path);
      CAPTURE(spec.name.raw());
      REQUIRE(spec.location.line >= 1);
      REQUIRE(spec.location.line <= static_cast<int>(lines.size()));
      const auto line = text::lower(lines[spec.location.line - 1]);
      std::string normalized_line;
      for (char c : line)
        normalized_line += (c == '_' || c == '.') ? '-' : c;
      CHECK(normalized_line.find(spec.name.normalized()) != std::string::npos);
      ++checked;
    }
  }
  CHECK(checked >= 25);
}
