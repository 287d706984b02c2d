#include "doctest.h"
#include "support.hpp"

#include "pytrim/detector.hpp"
#include "pytrim/fsutil.hpp"
#include "pytrim/resolver_static.hpp"

#include <random>

using namespace pytrim;

namespace {

struct Loaded {
  Discovery discovery;
  StaticResolution static_result;
  std::vector<ImportBinding> bindings;
};

Loaded load(const std::filesystem::path &root) {
  Loaded l;
  l.discovery = discover_config_files(root);
  l.static_result = static_dependency_set(l.discovery);
  l.bindings = scan_imports(root, l.discovery.python_sources);
  return l;
}

DetectorInput input_from(const Loaded &l) {
  DetectorInput in;
  for (const auto &[key, decl] : l.static_result.dependencies)
    in.dependencies.push_back(decl);
  in.bindings = l.bindings;
  return in;
}

} // namespace

TEST_CASE("scan_source: binding kinds") {
  const auto from = scan_source("from rich import print\n", "a.py");
  REQUIRE(from.size() == 1);
  CHECK(from[0].top_level == "rich");
  CHECK(from[0].module_path == "rich");
  CHECK(from[0].kind == ImportKind::FromImport);
  CHECK(from[0].aliased_names.size() == 1);
  CHECK(from[0].aliased_names[0].first == "print");

  CHECK(scan_source("", "a.py").empty());

  const auto dyn = scan_source("import importlib; importlib.import_module(\"yaml\")\n", "a.py");
  REQUIRE(dyn.size() == 2);
  CHECK(dyn[1].top_level == "yaml");
  CHECK(dyn[1].kind == ImportKind::DynamicLiteral);

  const auto mixed = scan_source("import a.b as c, d\nfrom . import x\nfrom .y import z\nm = __import__('e.f')\n"
                                 "if True:\n    from g.h import (i,\n        j as k)\n",
                                 "pkg/m.py");
  REQUIRE(mixed.size() == 4);
  CHECK(mixed[0].top_level == "a");
  CHECK(mixed[0].module_path == "a.b");
  CHECK(mixed[1].top_level == "d");
  CHECK(mixed[2].top_level == "e");
  CHECK(mixed[2].kind == ImportKind::DunderImport);
  CHECK(mixed[3].top_level == "g");
  CHECK(mixed[3].location.line == 6);
  CHECK(mixed[3].location.file_path == "pkg/m.py");
  CHECK(mixed[3].aliased_names[1].second == std::optional<std::string>("k"));
  CHECK_THROWS_AS(scan_source("import (\n", "bad.py"), Error);
}

TEST_CASE("scan_imports skips unparseable files with a warning") {
  TempDir dir;
  fixture::write_tree(dir.path(), {{"ok.py", "import rich\n"}, {"bad.py", "def f(:\n"}});
  std::vector<std::string> warnings;
  const auto bindings = scan_imports(dir.path(), {"bad.py", "ok.py"}, &warnings);
  REQUIRE(bindings.size() == 1);
  CHECK(bindings[0].top_level == "rich");
  CHECK(warnings.size() == 1);
}

TEST_CASE("map_package_to_imports") {
  CHECK(map_package_to_imports(normalize_name("my-lib")) == std::set<std::string>{"my_lib"});
  CHECK(map_package_to_imports(normalize_name("Pillow")) == std::set<std::string>{"PIL"});
  CHECK(map_package_to_imports(normalize_name("beautifulsoup4")) == std::set<std::string>{"bs4"});

  DistributionRecord yaml;
  yaml.name = normalize_name("PyYAML");
  yaml.import_names = {"yaml"};
  DistributionRecord two;
  two.name = normalize_name("two-mods");
  two.import_names = {"alpha", "beta"};
  const std::vector<DistributionRecord> records = {yaml, two};
  CHECK(map_package_to_imports(normalize_name("pyyaml"), &records) == std::set<std::string>{"yaml"});
  CHECK(map_package_to_imports(normalize_name("two_mods"), &records) == std::set<std::string>{"alpha", "beta"});
  CHECK(map_package_to_imports(normalize_name("PyYAML")).count("yaml") == 1);
}

TEST_CASE("detect_unused: softlayer finds prettytable in four files") {
  TempDir dir;
  fixture::write_tree(dir.path(), fixture::softlayer());
  const auto findings = detect_unused(input_from(load(dir.path())));
  REQUIRE(findings.size() == 1);
  CHECK(findings[0].package.normalized() == "prettytable");
  CHECK(findings[0].declared_at.size() == 4);
  CHECK(findings[0].import_sites.empty());
  CHECK(findings[0].detector_id == "builtin-imports");
  CHECK_FALSE(findings[0].report_only);
}

TEST_CASE("detect_unused: imports and dynamic imports keep a dependency") {
  DetectorInput in;
  in.dependencies = {Declaration{normalize_name("rich"), {}}, Declaration{normalize_name("PyYAML"), {}},
                     Declaration{normalize_name("unused-thing"), {}}};
  in.bindings = scan_source("from rich import print\nimport importlib\nimportlib.import_module('yaml')\n", "m.py");
  const auto findings = detect_unused(in);
  REQUIRE(findings.size() == 1);
  CHECK(findings[0].package.normalized() == "unused-thing");
  CHECK(findings[0].report_only);
}

TEST_CASE("detect_unused is conservative and deterministic") {
  std::mt19937 rng(21);
  const std::vector<std::string> names = {"rich", "click", "PyYAML", "Pillow", "python-dateutil", "scikit-learn",
                                          "my-lib", "attrs", "beautifulsoup4", "requests"};
  for (int round = 0; round < 200; ++round) {
    DetectorInput in;
    std::string source;
    for (const auto &n : names) {
      if (rng() % 2)
        in.dependencies.push_back(Declaration{normalize_name(n), {}});
      if (rng() % 3 == 0) {
        const auto imports = map_package_to_imports(normalize_name(n));
        const auto &module = *std::next(imports.begin(), static_cast<long>(rng() % imports.size()));
        switch (rng() % 3) {
        case 0:
          source += "import " + module + "\n";
          break;
        case 1:
          source += "from " + module + " import thing\n";
          break;
        default:
          source += "importlib.import_module('" + module + "')\n";
        }
      }
    }
    in.bindings = scan_source(source, "gen.py");
    std::set<std::string> imported;
    for (const auto &b : in.bindings)
      imported.insert(b.top_level);
    const auto findings = detect_unused(in);
    for (const auto &f : findings) {
      for (const auto &module : map_package_to_imports(f.package))
        CHECK(imported.count(module) == 0);
    }
    CHECK(std::is_sorted(findings.begin(), findings.end(),
                         [](const BloatFinding &a, const BloatFinding &b) { return a.package < b.package; }));
    const auto again = detect_unused(in);
    REQUIRE(again.size() == findings.size());
    for (std::size_t i = 0; i < again.size(); ++i)
      CHECK(again[i].package == findings[i].package);
  }
}

TEST_CASE("read_package_list") {
  CHECK(read_package_list("# unused\nprettytable\n\n  rich  # later\n") ==
        std::vector<std::string>{"prettytable", "rich"});
  CHECK(read_package_list("").empty());
}

TEST_CASE("load_external_findings: softlayer and edge cases") {
  TempDir dir;
  fixture::write_tree(dir.path(), fixture::softlayer());
  const auto l = load(dir.path());

  const auto one = load_external_findings({"prettytable"}, l.static_result, l.bindings);
  REQUIRE(one.size() == 1);
  CHECK(one[0].declared_at.size() == 4);
  CHECK(one[0].detector_id == "external");
  CHECK(one[0].declared_at == l.static_result.declarations.at("prettytable").locations);

  const auto variant = load_external_findings({"PrettyTable"}, l.static_result, l.bindings);
  REQUIRE(variant.size() == 1);
  CHECK(variant[0].package == one[0].package);
  CHECK(variant[0].declared_at == one[0].declared_at);

  std::vector<std::string> warnings;
  const auto missing = load_external_findings({"not-declared-anywhere"}, l.static_result, l.bindings, nullptr, &warnings);
  REQUIRE(missing.size() == 1);
  CHECK(missing[0].report_only);
  CHECK(missing[0].declared_at.empty());
  CHECK(warnings.size() == 1);

  const auto imported = load_external_findings({"click"}, l.static_result, l.bindings);
  REQUIRE(imported.size() == 1);
  CHECK(imported[0].import_sites.size() == 1);
  CHECK(imported[0].import_sites[0].location.file_path == "SoftLayer/formatting.py");
}
