#include "pytrim/resolver_dynamic.hpp"

#include "pytrim/fsutil.hpp"
#include "pytrim/subprocess.hpp"
#include "pytrim/text.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

namespace pytrim {

namespace fs = std::filesystem;

namespace {

std::string url_to_path(std::string_view url) {
  if (!url.starts_with("file://"))
    return {};
  url.remove_prefix(7);
  std::string out;
  for (std::size_t i = 0; i < url.size(); ++i) {
    if (url[i] == '%' && i + 2 < url.size()) {
      out += static_cast<char>(std::stoi(std::string(url.substr(i + 1, 2)), nullptr, 16));
      i += 2;
    } else {
      out += url[i];
    }
  }
  return out;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || text::is_digit(s.front()))
    return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return text::is_alnum(c) || c == '_'; });
}

std::set<std::string> record_top_levels(std::string_view record) {
  std::set<std::string> out;
  for (auto line : text::split_lines(record)) {
    line = text::chomp(line);
    if (line.empty())
      continue;
    std::string path;
    if (line.front() == '"') {
      const auto close = line.find('"', 1);
      path = std::string(line.substr(1, close == std::string_view::npos ? line.npos : close - 1));
    } else {
      path = std::string(line.substr(0, line.find(',')));
    }
    const auto slash = path.find('/');
    std::string head = path.substr(0, slash);
    if (slash == std::string::npos) {
      if (head.ends_with(".py"))
        head.resize(head.size() - 3);
      else if (head.ends_with(".so") || head.ends_with(".pyd"))
        head = head.substr(0, head.find('.'));
      else
        continue;
    } else if (head.ends_with(".dist-info") || head.ends_with(".data") || head == "__pycache__" || head == "..") {
      continue;
    }
    if (is_identifier(head))
      out.insert(head);
  }
  return out;
}

} // namespace

InstallerConfig installer_from_string(std::string_view spec) {
  InstallerConfig config;
  config.command.clear();
  for (auto part : text::split(spec, ' ')) {
    part = text::trim(part);
    if (!part.empty())
      config.command.emplace_back(part);
  }
  if (config.command.empty())
    config.command = {"pip"};
  return config;
}

InstallerConfig default_installer(const std::optional<std::string> &flag) {
  if (flag && !text::trim(*flag).empty())
    return installer_from_string(*flag);
  if (const char *env = std::getenv("PYTRIM_INSTALLER"); env && *env)
    return installer_from_string(env);
  return {};
}

InstallResult install_isolated(const fs::path &project_root, const fs::path &target_dir,
                               const InstallerConfig &installer) {
  if (installer.command.empty() || !find_executable(installer.command.front()))
    fail(ErrorKind::InstallerNotFound,
         "installer not found: " + (installer.command.empty() ? std::string() : installer.command.front()));
  InstallResult result;
  result.target_dir = target_dir;
  auto argv = installer.command;
  argv.insert(argv.end(), {"install", "-t", target_dir.string(), project_root.string()});
  ProcessOptions options;
  options.timeout = installer.timeout;
  const auto run = run_process(argv, options);
  result.installer_stdout = run.out;
  result.installer_stderr = run.err;
  result.duration = run.duration;
  result.timed_out = run.timed_out;
  bool has_dist_info = false;
  std::error_code ec;
  if (fs::is_directory(target_dir, ec)) {
    for (const auto &entry : fs::directory_iterator(target_dir, ec)) {
      if (entry.is_directory() && entry.path().filename().string().ends_with(".dist-info"))
        has_dist_info = true;
    }
  }
  result.succeeded = run.exit_code == 0 && !run.timed_out && has_dist_info;
  return result;
}

std::optional<std::string> MetadataHeaders::first(std::string_view key) const {
  for (const auto &[k, v] : fields) {
    if (text::iequals(k, key))
      return v;
  }
  return std::nullopt;
}

std::vector<std::string> MetadataHeaders::all(std::string_view key) const {
  std::vector<std::string> out;
  for (const auto &[k, v] : fields) {
    if (text::iequals(k, key))
      out.push_back(v);
  }
  return out;
}

MetadataHeaders parse_metadata(std::string_view content) {
  MetadataHeaders headers;
  for (auto line : text::split_lines(text::strip_bom(content))) {
    line = text::chomp(line);
    if (line.empty())
      break;
    if ((line.front() == ' ' || line.front() == '\t') && !headers.fields.empty()) {
      headers.fields.back().second += "\n" + std::string(text::trim(line));
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string_view::npos)
      continue;
    headers.fields.emplace_back(std::string(text::trim(line.substr(0, colon))),
                                std::string(text::trim(line.substr(colon + 1))));
  }
  return headers;
}

DistributionRecord read_dist_info(const fs::path &dir) {
  std::error_code ec;
  const auto metadata_path = dir / "METADATA";
  if (!fs::is_regular_file(metadata_path, ec))
    fail(ErrorKind::MalformedMetadata, dir.filename().string() + ": no METADATA");
  const auto headers = parse_metadata(text::read_file(metadata_path));
  const auto name = headers.first("Name");
  if (!name || name->empty())
    fail(ErrorKind::MalformedMetadata, dir.filename().string() + ": METADATA has no Name");

  DistributionRecord record;
  try {
    record.name = normalize_name(*name);
  } catch (const Error &e) {
    fail(ErrorKind::MalformedMetadata, dir.filename().string() + ": " + e.what());
  }
  record.version = headers.first("Version").value_or("");
  for (const auto &line : headers.all("Requires-Dist")) {
    try {
      if (auto spec = parse_requirement_line(line)) {
        spec->location = SourceLocation{(dir.filename() / "METADATA").generic_string(), 1, FileKind::Unmodifiable,
                                        "Requires-Dist"};
        record.requires_dist.push_back(std::move(*spec));
      }
    } catch (const Error &e) {
      fail(ErrorKind::MalformedMetadata, dir.filename().string() + ": bad Requires-Dist: " + e.what());
    }
  }

  if (fs::is_regular_file(dir / "top_level.txt", ec)) {
    for (auto line : text::split_lines(text::read_file(dir / "top_level.txt"))) {
      const auto module = text::trim(line);
      if (!module.empty())
        record.import_names.emplace(module);
    }
  }
  if (record.import_names.empty() && fs::is_regular_file(dir / "RECORD", ec))
    record.import_names = record_top_levels(text::read_file(dir / "RECORD"));
  if (record.import_names.empty())
    record.import_names.insert(record.name.module_guess());

  if (fs::is_regular_file(dir / "direct_url.json", ec)) {
    try {
      const auto j = nlohmann::json::parse(text::read_file(dir / "direct_url.json"));
      if (j.contains("url") && j["url"].is_string())
        record.origin_url = j["url"].get<std::string>();
    } catch (const nlohmann::json::exception &) {
    }
  }
  return record;
}

std::vector<DistributionRecord> scan_dist_infos(const fs::path &target_dir, std::vector<std::string> *warnings) {
  std::vector<fs::path> dirs;
  std::error_code ec;
  for (const auto &entry : fs::directory_iterator(target_dir, ec)) {
    if (entry.is_directory() && entry.path().filename().string().ends_with(".dist-info"))
      dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  std::vector<DistributionRecord> out;
  for (const auto &dir : dirs) {
    try {
      out.push_back(read_dist_info(dir));
    } catch (const Error &e) {
      if (warnings)
        warnings->push_back(std::string("skipped distribution: ") + e.what());
    }
  }
  return out;
}

bool marker_mentions_extra(std::string_view marker) {
  std::size_t pos = 0;
  while ((pos = marker.find("extra", pos)) != std::string_view::npos) {
    const bool left_ok = pos == 0 || !(text::is_alnum(marker[pos - 1]) || marker[pos - 1] == '_');
    const auto after = pos + 5;
    const bool right_ok = after >= marker.size() || !(text::is_alnum(marker[after]) || marker[after] == '_');
    if (left_ok && right_ok)
      return true;
    pos = after;
  }
  return false;
}

DependencyGraph build_dependency_graph(const std::vector<DistributionRecord> &records,
                                       const std::optional<PackageName> &project_name) {
  if (records.empty())
    fail(ErrorKind::MissingRoot, "no installed distributions");
  DependencyGraph graph;
  for (const auto &r : records)
    graph.nodes.emplace(r.name.normalized(), r);
  for (const auto &[from, record] : graph.nodes) {
    for (const auto &req : record.requires_dist) {
      if (req.marker && marker_mentions_extra(*req.marker))
        continue;
      const auto &to = req.name.normalized();
      if (to != from && graph.nodes.count(to))
        graph.edges.emplace(from, to);
    }
  }
  if (project_name && graph.nodes.count(project_name->normalized())) {
    graph.root = graph.nodes.at(project_name->normalized()).name;
    return graph;
  }
  std::vector<std::string> candidates;
  for (const auto &[name, record] : graph.nodes) {
    if (graph.in_degree(name) == 0)
      candidates.push_back(name);
  }
  if (candidates.empty())
    fail(ErrorKind::MissingRoot, "every installed distribution has an incoming edge");
  if (candidates.size() > 1)
    fail(ErrorKind::MultipleRoots, "several root candidates: " + text::join(candidates, ", "));
  graph.root = graph.nodes.at(candidates.front()).name;
  return graph;
}

std::string_view to_string(Provenance provenance) {
  switch (provenance) {
  case Provenance::Static:
    return "static";
  case Provenance::Dynamic:
    return "dynamic";
  case Provenance::Both:
    return "both";
  }
  return "?";
}

DynamicResolution resolve_dynamic(const Discovery &discovery, const InstallerConfig &installer) {
  DynamicResolution out;
  out.attempted = true;
  std::optional<TempDir> scratch;
  try {
    scratch.emplace();
    const auto source = scratch->path() / "src";
    const auto target = scratch->path() / "target";
    copy_tree(discovery.root, source,
              {".git", ".hg", ".svn", ".pytrim", "node_modules", ".venv", "venv", ".tox", ".nox", "__pycache__", "build", "dist"});
    out.install = install_isolated(source, target, installer);
    if (!out.install.succeeded) {
      out.warnings.push_back(out.install.timed_out ? "install timed out; using static resolution only"
                                                   : "install failed; using static resolution only");
      return out;
    }
    out.records = scan_dist_infos(target, &out.warnings);

    std::optional<PackageName> root;
    const auto source_path = fs::weakly_canonical(source).generic_string();
    for (const auto &r : out.records) {
      const auto path = url_to_path(r.origin_url);
      if (!path.empty() && fs::weakly_canonical(path).generic_string() == source_path) {
        root = r.name;
        break;
      }
    }
    if (!root)
      root = discovery.project_name;
    out.graph = build_dependency_graph(out.records, root);
  } catch (const Error &e) {
    out.warnings.push_back(std::string("dynamic resolution unavailable: ") + e.what());
    out.graph.reset();
  }
  return out;
}

Resolution resolve_dependencies(const StaticResolution &static_result, const DynamicResolution *dynamic) {
  Resolution r;
  for (const auto &[key, decl] : static_result.dependencies)
    r.dependencies[key] = ResolvedDependency{decl.name, Provenance::Static};
  if (!dynamic || !dynamic->graph) {
    if (dynamic)
      r.warnings.insert(r.warnings.end(), dynamic->warnings.begin(), dynamic->warnings.end());
    if (static_result.has_dynamic_setup)
      r.warnings.push_back("setup.py builds its dependencies dynamically; static resolution may be incomplete");
    return r;
  }
  r.warnings.insert(r.warnings.end(), dynamic->warnings.begin(), dynamic->warnings.end());
  for (const auto &name : dynamic->graph->direct_dependencies()) {
    auto it = r.dependencies.find(name.normalized());
    if (it == r.dependencies.end())
      r.dependencies.emplace(name.normalized(), ResolvedDependency{name, Provenance::Dynamic});
    else
      it->second.provenance = Provenance::Both;
  }
  return r;
}

} // namespace pytrim
