#include "pytrim/pipeline.hpp"

#include "pytrim/text.hpp"

namespace pytrim {

ReportInput PipelineResult::report_input() const {
  ReportInput input;
  input.project = discovery.project_name ? discovery.project_name->raw() : discovery.root.filename().string();
  input.findings = findings;
  input.plan = plan;
  for (const auto &[key, dep] : resolution.dependencies)
    input.provenance[key] = dep.provenance;
  input.warnings = warnings;
  return input;
}

bool is_test_path(const std::string &relative_path) {
  const auto parts = text::split(relative_path, '/');
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (parts[i] == "test" || parts[i] == "tests")
      return true;
  }
  const auto name = parts.empty() ? std::string_view() : parts.back();
  return name.starts_with("test_") || name.ends_with("_test.py") || name == "conftest.py";
}

PipelineResult run_pipeline(const PipelineOptions &options) {
  PipelineResult r;
  r.discovery = discover_config_files(options.project_root, DiscoveryOptions{options.exclude_globs});
  r.warnings = r.discovery.warnings;
  r.static_result = static_dependency_set(r.discovery);

  std::vector<std::string> sources;
  for (const auto &path : r.discovery.python_sources) {
    if (options.scan_tests || !is_test_path(path))
      sources.push_back(path);
  }
  r.bindings = scan_imports(r.discovery.root, sources, &r.warnings);

  if (options.remove) {
    r.findings = load_external_findings(*options.remove, r.static_result, r.bindings, nullptr, &r.warnings);
    for (const auto &f : r.findings) {
      if (auto it = r.static_result.dependencies.find(f.package.normalized()); it != r.static_result.dependencies.end())
        r.resolution.dependencies[f.package.normalized()] = ResolvedDependency{f.package, Provenance::Static};
    }
  } else {
    if (options.dynamic)
      r.dynamic = resolve_dynamic(r.discovery, options.installer);
    r.resolution = resolve_dependencies(r.static_result, options.dynamic ? &r.dynamic : nullptr);
    r.warnings.insert(r.warnings.end(), r.resolution.warnings.begin(), r.resolution.warnings.end());

    DetectorInput input;
    for (const auto &[key, dep] : r.resolution.dependencies) {
      Declaration decl{dep.name, {}};
      if (auto it = r.static_result.declarations.find(key); it != r.static_result.declarations.end())
        decl.locations = it->second.locations;
      input.dependencies.push_back(std::move(decl));
    }
    input.dist_records = r.dynamic.graph ? &r.dynamic.records : nullptr;
    input.bindings = r.bindings;
    r.findings = detect_unused(input);
  }

  r.plan = plan_removal(r.discovery, r.findings);
  return r;
}

} // namespace pytrim
