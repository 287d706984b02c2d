#include "pytrim/detector.hpp"

#include "pytrim/python_source.hpp"
#include "pytrim/text.hpp"

#include <algorithm>
#include <map>

namespace pytrim {

namespace {

std::string top_level_of(std::string_view module) { return std::string(module.substr(0, module.find('.'))); }

const std::map<std::string, std::vector<std::string>> &known_import_names() {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"beautifulsoup4", {"bs4"}},
      {"opencv-python", {"cv2"}},
      {"opencv-python-headless", {"cv2"}},
      {"pillow", {"PIL"}},
      {"pyyaml", {"yaml", "_yaml"}},
      {"python-dateutil", {"dateutil"}},
      {"scikit-learn", {"sklearn"}},
      {"scikit-image", {"skimage"}},
      {"pyjwt", {"jwt"}},
      {"protobuf", {"google"}},
      {"attrs", {"attr", "attrs"}},
  };
  return table;
}

std::vector<ImportBinding> matching_sites(const std::set<std::string> &names, const std::vector<ImportBinding> &bindings) {
  std::vector<ImportBinding> out;
  for (const auto &b : bindings) {
    if (names.count(b.top_level))
      out.push_back(b);
  }
  return out;
}

} // namespace

std::vector<ImportBinding> scan_source(std::string_view content, const std::string &path) {
  const python::Module module(text::strip_bom(content));
  std::vector<ImportBinding> out;
  for (const auto &stmt : python::find_import_statements(module)) {
    if (stmt.relative_level > 0)
      continue;
    const int line = module.tokens()[stmt.first_token].line;
    if (stmt.from_import) {
      ImportBinding b;
      b.module_path = stmt.module;
      b.top_level = top_level_of(stmt.module);
      b.kind = ImportKind::FromImport;
      b.location = SourceLocation{path, line, FileKind::PythonSource, ""};
      for (const auto &n : stmt.names)
        b.aliased_names.emplace_back(n.name, n.alias);
      out.push_back(std::move(b));
    } else {
      for (const auto &n : stmt.names) {
        ImportBinding b;
        b.module_path = n.name;
        b.top_level = top_level_of(n.name);
        b.kind = ImportKind::Plain;
        b.location = SourceLocation{path, line, FileKind::PythonSource, ""};
        b.aliased_names.emplace_back(n.name, n.alias);
        out.push_back(std::move(b));
      }
    }
  }
  for (const auto &d : python::find_dynamic_imports(module)) {
    if (d.module.empty() || d.module.front() == '.')
      continue;
    ImportBinding b;
    b.module_path = d.module;
    b.top_level = top_level_of(d.module);
    b.kind = d.dunder ? ImportKind::DunderImport : ImportKind::DynamicLiteral;
    b.location = SourceLocation{path, d.line, FileKind::PythonSource, ""};
    out.push_back(std::move(b));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ImportBinding &a, const ImportBinding &b) { return a.location.line < b.location.line; });
  return out;
}

std::vector<ImportBinding> scan_imports(const std::filesystem::path &root, const std::vector<std::string> &files,
                                        std::vector<std::string> *warnings) {
  std::vector<ImportBinding> out;
  for (const auto &file : files) {
    try {
      auto bindings = scan_source(text::read_file(root / file), file);
      out.insert(out.end(), std::make_move_iterator(bindings.begin()), std::make_move_iterator(bindings.end()));
    } catch (const Error &e) {
      if (warnings)
        warnings->push_back(file + ": not scanned: " + e.what());
    }
  }
  return out;
}

std::set<std::string> map_package_to_imports(const PackageName &package,
                                             const std::vector<DistributionRecord> *dist_records) {
  if (dist_records) {
    for (const auto &r : *dist_records) {
      if (r.name == package && !r.import_names.empty())
        return r.import_names;
    }
  }
  const auto &table = known_import_names();
  if (auto it = table.find(package.normalized()); it != table.end())
    return {it->second.begin(), it->second.end()};
  return {package.module_guess()};
}

std::vector<BloatFinding> detect_unused(const DetectorInput &input) {
  std::set<std::string> used;
  for (const auto &b : input.bindings)
    used.insert(b.top_level);
  std::vector<BloatFinding> out;
  for (const auto &dep : input.dependencies) {
    const auto names = map_package_to_imports(dep.name, input.dist_records);
    const bool imported = std::any_of(names.begin(), names.end(), [&](const std::string &n) { return used.count(n); });
    if (imported)
      continue;
    BloatFinding f;
    f.package = dep.name;
    f.declared_at = dep.locations;
    f.detector_id = "builtin-imports";
    f.report_only = dep.locations.empty();
    out.push_back(std::move(f));
  }
  std::sort(out.begin(), out.end(),
            [](const BloatFinding &a, const BloatFinding &b) { return a.package < b.package; });
  return out;
}

std::vector<std::string> read_package_list(std::string_view content) {
  std::vector<std::string> out;
  for (auto line : text::split_lines(text::strip_bom(content))) {
    auto body = text::trim(text::chomp(line));
    if (const auto hash = body.find('#'); hash != std::string_view::npos)
      body = text::trim(body.substr(0, hash));
    if (!body.empty())
      out.emplace_back(body);
  }
  return out;
}

std::vector<BloatFinding> load_external_findings(const std::vector<std::string> &packages,
                                                 const StaticResolution &static_result,
                                                 const std::vector<ImportBinding> &bindings,
                                                 const std::vector<DistributionRecord> *dist_records,
                                                 std::vector<std::string> *warnings) {
  std::map<std::string, BloatFinding> by_name;
  for (const auto &raw : packages) {
    const auto name = normalize_name(raw);
    if (by_name.count(name.normalized()))
      continue;
    BloatFinding f;
    f.package = name;
    f.detector_id = "external";
    if (auto it = static_result.declarations.find(name.normalized()); it != static_result.declarations.end())
      f.declared_at = it->second.locations;
    f.import_sites = matching_sites(map_package_to_imports(name, dist_records), bindings);
    if (f.declared_at.empty()) {
      f.report_only = true;
      if (warnings)
        warnings->push_back(name.raw() + ": no declaration found; reported only");
    }
    by_name.emplace(name.normalized(), std::move(f));
  }
  std::vector<BloatFinding> out;
  for (auto &[key, f] : by_name)
    out.push_back(std::move(f));
  return out;
}

} // namespace pytrim
