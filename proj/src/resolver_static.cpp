#include "pytrim/resolver_static.hpp"

#include "pytrim/ini.hpp"
#include "pytrim/setup_py.hpp"
#include "pytrim/text.hpp"
#include "pytrim/toml.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <array>
#include <set>

namespace pytrim {

namespace fs = std::filesystem;

namespace {

void warn(std::vector<std::string> *warnings, std::string message) {
  if (warnings)
    warnings->push_back(std::move(message));
}

bool is_excluded_dir(const fs::path &dir) {
  static const std::set<std::string> names = {
      ".git",   ".hg",     ".svn",    "node_modules", "venv",          ".venv",       "env",
      "build",  "dist",    ".pytrim", "__pycache__",  ".tox",          ".nox",        ".eggs",
      ".mypy_cache", ".pytest_cache", "site-packages"};
  const auto name = dir.filename().string();
  if (names.count(name) || name.ends_with(".egg-info") || name.ends_with(".dist-info"))
    return true;
  std::error_code ec;
  return fs::exists(dir / "pyvenv.cfg", ec);
}

bool matches_any(const std::vector<std::string> &globs, const std::string &rel, const std::string &name) {
  return std::any_of(globs.begin(), globs.end(), [&](const std::string &g) {
    return text::glob_match(g, rel) || text::glob_match(g, name);
  });
}

bool is_requirements_name(const std::string &name) {
  const auto l = text::lower(name);
  if (l == "manifest.in")
    return false;
  return (l.find("requirements") != std::string::npos && l.ends_with(".txt")) || l.ends_with(".in");
}

bool is_environment_name(const std::string &name) {
  const auto l = text::lower(name);
  return l.starts_with("environment") && (l.ends_with(".yml") || l.ends_with(".yaml"));
}

bool is_lock_name(const std::string &name) {
  return name == "poetry.lock" || name == "Pipfile.lock" || name == "uv.lock" || name == "pdm.lock";
}

bool is_mention_name(const std::string &name) {
  const auto l = text::lower(name);
  return name.starts_with("Dockerfile") || l.starts_with("readme") || l.ends_with(".sh") || l.ends_with(".rst") ||
         l.ends_with(".md");
}

std::string decode(std::string_view raw, const std::string &path, std::vector<std::string> *warnings) {
  const auto body = text::strip_bom(raw);
  if (!text::is_valid_utf8(body))
    warn(warnings, path + ": not valid UTF-8, read as Latin-1");
  return std::string(body);
}

std::optional<RequirementSpec> parse_spec(std::string_view entry, SourceLocation location,
                                          std::vector<std::string> *warnings) {
  try {
    auto spec = parse_requirement_line(entry);
    if (spec)
      spec->location = std::move(location);
    return spec;
  } catch (const Error &e) {
    warn(warnings, location.file_path + ":" + std::to_string(location.line) + ": skipped: " + e.what());
    return std::nullopt;
  }
}

// Spec for a poetry dependency table entry (`name = "^1.0"` or an inline
// table / sub-table carrying version and extras).
std::optional<RequirementSpec> poetry_spec(const std::string &key, const toml::Value &value, SourceLocation location,
                                           std::vector<std::string> *warnings) {
  RequirementSpec spec;
  try {
    spec.name = normalize_name(key);
  } catch (const Error &e) {
    warn(warnings, location.file_path + ":" + std::to_string(location.line) + ": skipped: " + e.what());
    return std::nullopt;
  }
  if (value.is_string()) {
    spec.version_constraint = value.string;
  } else if (value.is_table()) {
    if (const auto *v = value.find("version"); v && v->is_string())
      spec.version_constraint = v->string;
    if (const auto *x = value.find("extras"); x && x->is_array()) {
      for (const auto &e : x->array) {
        if (e.is_string())
          spec.extras.insert(e.string);
      }
    }
  }
  spec.location = std::move(location);
  return spec;
}

const toml::Header *find_header(const toml::Document &doc, const std::vector<std::string> &path) {
  for (const auto &h : doc.headers) {
    if (h.path == path)
      return &h;
  }
  return nullptr;
}

int value_line(const toml::Document &doc, const text::LineIndex &index, const toml::Value &value,
               const std::vector<std::string> &path) {
  if (value.key_begin != toml::npos)
    return index.line_of(value.key_begin);
  if (value.begin != toml::npos)
    return index.line_of(value.begin);
  if (const auto *h = find_header(doc, path))
    return index.line_of(h->begin);
  return 1;
}

void collect_file_directive(const toml::Value *v, std::vector<std::string> &out) {
  if (!v || !v->is_table())
    return;
  const auto *file = v->find("file");
  if (!file)
    return;
  if (file->is_string())
    out.push_back(file->string);
  else if (file->is_array()) {
    for (const auto &e : file->array) {
      if (e.is_string())
        out.push_back(e.string);
    }
  }
}

std::vector<std::string> pyproject_referenced_files(const toml::Document &doc) {
  std::vector<std::string> out;
  const auto *dynamic = doc.root.at_path({"tool", "setuptools", "dynamic"});
  if (!dynamic)
    return out;
  collect_file_directive(dynamic->find("dependencies"), out);
  if (const auto *optional = dynamic->find("optional-dependencies"); optional && optional->is_table()) {
    for (const auto &[group, value] : optional->table)
      collect_file_directive(&value, out);
  }
  return out;
}

std::vector<std::string> setup_cfg_referenced_files(const ini::Document &doc) {
  std::vector<std::string> out;
  auto scan = [&](const ini::Option &option) {
    for (const auto &v : ini::value_lines(option)) {
      if (!v.text.starts_with("file:"))
        continue;
      for (auto part : text::split(std::string_view(v.text).substr(5), ',')) {
        part = text::trim(part);
        if (!part.empty())
          out.emplace_back(part);
      }
    }
  };
  if (const auto *options = doc.find("options")) {
    if (const auto *o = options->find("install_requires"))
      scan(*o);
  }
  if (const auto *extras = doc.find("options.extras_require")) {
    for (const auto &o : extras->options)
      scan(o);
  }
  return out;
}

} // namespace

std::string_view to_string(ParseStatus status) {
  switch (status) {
  case ParseStatus::Parsed:
    return "parsed";
  case ParseStatus::PartiallyParsed:
    return "partially-parsed";
  case ParseStatus::Dynamic:
    return "dynamic";
  case ParseStatus::Failed:
    return "failed";
  }
  return "?";
}

std::string conda_package_name(std::string_view entry) {
  if (const auto sep = entry.find("::"); sep != std::string_view::npos)
    entry.remove_prefix(sep + 2);
  std::size_t n = 0;
  while (n < entry.size() && (text::is_alnum(entry[n]) || entry[n] == '-' || entry[n] == '_' || entry[n] == '.'))
    ++n;
  return std::string(entry.substr(0, n));
}

const ConfigFile *Discovery::find(std::string_view path) const {
  for (const auto &f : config_files) {
    if (f.path == path)
      return &f;
  }
  return nullptr;
}

std::vector<LogicalLine> requirement_logical_lines(std::string_view content) {
  std::vector<LogicalLine> out;
  const auto lines = text::split_lines(content);
  std::optional<LogicalLine> pending;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    std::string_view line = text::chomp(lines[i]);
    if (i == 0)
      line = text::strip_bom(line);
    const bool comment = text::trim_left(line).starts_with('#');
    if (!line.ends_with('\\') || comment) {
      if (pending) {
        pending->text += comment ? " " + std::string(line) : std::string(line);
        pending->last_line = number;
        out.push_back(std::move(*pending));
        pending.reset();
      } else {
        out.push_back({number, number, std::string(line)});
      }
    } else {
      if (!pending)
        pending = LogicalLine{number, number, ""};
      auto piece = line;
      while (!piece.empty() && piece.front() == '\\')
        piece.remove_prefix(1);
      while (!piece.empty() && piece.back() == '\\')
        piece.remove_suffix(1);
      pending->text += piece;
      pending->last_line = number;
    }
  }
  if (pending)
    out.push_back(std::move(*pending));
  return out;
}

std::optional<std::string> requirement_include(std::string_view line) {
  auto body = text::trim(strip_requirement_comment(line));
  for (std::string_view flag : {"--requirement", "-r"}) {
    if (!body.starts_with(flag))
      continue;
    auto rest = body.substr(flag.size());
    if (rest.starts_with('='))
      rest.remove_prefix(1);
    else if (!rest.empty() && !text::is_space(rest.front()) && flag == "--requirement")
      continue;
    rest = text::trim(rest);
    if (rest.empty())
      return std::nullopt;
    return std::string(rest);
  }
  return std::nullopt;
}

std::vector<RequirementSpec> parse_requirements_file(std::string_view content, const std::string &path,
                                                     std::vector<std::string> *warnings) {
  std::vector<RequirementSpec> out;
  for (const auto &logical : requirement_logical_lines(content)) {
    auto spec = parse_spec(logical.text, SourceLocation{path, logical.first_line, FileKind::Requirements, ""}, warnings);
    if (spec)
      out.push_back(std::move(*spec));
  }
  return out;
}

std::vector<RequirementSpec> parse_pyproject(std::string_view content, const std::string &path,
                                             std::vector<std::string> *warnings) {
  const auto doc = toml::parse(content);
  const text::LineIndex index(content);
  std::vector<RequirementSpec> out;

  auto from_array = [&](const toml::Value *array, const std::string &detail) {
    if (!array || !array->is_array())
      return;
    for (const auto &item : array->array) {
      if (!item.is_string())
        continue;
      auto spec = parse_spec(item.string,
                             SourceLocation{path, index.line_of(item.begin), FileKind::PyProjectToml, detail}, warnings);
      if (spec)
        out.push_back(std::move(*spec));
    }
  };

  if (const auto *project = doc.root.find("project"); project && project->is_table()) {
    from_array(project->find("dependencies"), "project.dependencies");
    if (const auto *optional = project->find("optional-dependencies"); optional && optional->is_table()) {
      for (const auto &[group, value] : optional->table)
        from_array(&value, "project.optional-dependencies." + group);
    }
  }

  auto from_poetry = [&](const toml::Value *table, const std::vector<std::string> &table_path) {
    if (!table || !table->is_table())
      return;
    const auto detail = text::join(table_path, ".");
    for (const auto &[key, value] : table->table) {
      if (text::lower(key) == "python")
        continue;
      auto entry_path = table_path;
      entry_path.push_back(key);
      const int line = value_line(doc, index, value, entry_path);
      auto spec = poetry_spec(key, value, SourceLocation{path, line, FileKind::PyProjectToml, detail}, warnings);
      if (spec)
        out.push_back(std::move(*spec));
    }
  };

  if (const auto *poetry = doc.root.at_path({"tool", "poetry"}); poetry && poetry->is_table()) {
    from_poetry(poetry->find("dependencies"), {"tool", "poetry", "dependencies"});
    from_poetry(poetry->find("dev-dependencies"), {"tool", "poetry", "dev-dependencies"});
    if (const auto *groups = poetry->find("group"); groups && groups->is_table()) {
      for (const auto &[group, value] : groups->table) {
        if (value.is_table())
          from_poetry(value.find("dependencies"), {"tool", "poetry", "group", group, "dependencies"});
      }
    }
  }
  return out;
}

std::vector<RequirementSpec> parse_setup_cfg(std::string_view content, const std::string &path,
                                             std::vector<std::string> *warnings) {
  const auto doc = ini::parse(content);
  std::vector<RequirementSpec> out;
  auto from_option = [&](const ini::Option &option, const std::string &detail) {
    for (const auto &v : ini::value_lines(option)) {
      if (v.text.starts_with("file:"))
        continue;
      // A single-line value may hold a comma separated list.
      std::vector<std::string_view> entries;
      if (option.values.size() == 1 && v.line == option.key_line)
        entries = text::split(strip_requirement_comment(v.text), ',');
      else
        entries.push_back(v.text);
      for (auto entry : entries) {
        auto spec = parse_spec(entry, SourceLocation{path, v.line, FileKind::SetupCfg, detail}, warnings);
        if (spec)
          out.push_back(std::move(*spec));
      }
    }
  };
  if (const auto *options = doc.find("options")) {
    if (const auto *o = options->find("install_requires"))
      from_option(*o, "options.install_requires");
  }
  if (const auto *extras = doc.find("options.extras_require")) {
    for (const auto &o : extras->options)
      from_option(o, "options.extras_require." + o.key);
  }
  return out;
}

SetupPyResult parse_setup_py_static(std::string_view content, const std::string &path,
                                    std::vector<std::string> *warnings) {
  SetupPyResult result;
  setup_py::Extraction extraction;
  try {
    extraction = setup_py::extract(content);
  } catch (const Error &e) {
    warn(warnings, path + ": " + e.what());
    result.failed = true;
    result.dynamic = true;
    return result;
  }
  result.dynamic = extraction.dynamic;
  result.anchor_line = extraction.anchor_line;
  result.project_name = extraction.project_name;
  result.referenced_files = extraction.referenced_files;
  for (const auto &req : extraction.requirements) {
    const std::string detail = req.group.empty() ? "install_requires" : "extras_require." + req.group;
    auto spec = parse_spec(req.text, SourceLocation{path, req.line, FileKind::SetupPy, detail}, warnings);
    if (spec)
      result.specs.push_back(std::move(*spec));
  }
  return result;
}

std::vector<RequirementSpec> parse_environment_yaml(std::string_view content, const std::string &path,
                                                    std::vector<std::string> *warnings) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(content));
  } catch (const YAML::Exception &e) {
    fail(ErrorKind::YamlSyntaxError, path + ": " + e.what());
  }
  std::vector<RequirementSpec> out;
  if (!root.IsMap() || !root["dependencies"] || !root["dependencies"].IsSequence())
    return out;
  for (const auto &item : root["dependencies"]) {
    if (item.IsScalar()) {
      const auto entry = item.as<std::string>();
      const auto name = conda_package_name(entry);
      const auto lowered = text::lower(name);
      if (name.empty() || lowered == "python" || lowered == "pip")
        continue;
      try {
        RequirementSpec spec;
        spec.name = normalize_name(name);
        spec.version_constraint = std::string(text::trim(std::string_view(entry).substr(entry.find(name) + name.size())));
        spec.location = SourceLocation{path, item.Mark().line + 1, FileKind::YamlEnv, "dependencies"};
        out.push_back(std::move(spec));
      } catch (const Error &e) {
        warn(warnings, path + ": skipped: " + e.what());
      }
    } else if (item.IsMap() && item["pip"] && item["pip"].IsSequence()) {
      for (const auto &pip : item["pip"]) {
        if (!pip.IsScalar())
          continue;
        auto spec = parse_spec(pip.as<std::string>(),
                               SourceLocation{path, pip.Mark().line + 1, FileKind::YamlEnv, "dependencies.pip"},
                               warnings);
        if (spec)
          out.push_back(std::move(*spec));
      }
    }
  }
  return out;
}

Discovery discover_config_files(const fs::path &project_root, const DiscoveryOptions &options) {
  std::error_code ec;
  if (!fs::is_directory(project_root, ec))
    fail(ErrorKind::NotADirectory, project_root.string() + " is not a directory");

  Discovery d;
  d.root = fs::weakly_canonical(project_root);

  struct Found {
    std::string rel;
    FileKind kind;
  };
  std::vector<Found> found;

  for (auto it = fs::recursive_directory_iterator(d.root, fs::directory_options::skip_permission_denied, ec);
       it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec)
      break;
    const auto &entry = *it;
    const auto rel = fs::relative(entry.path(), d.root).generic_string();
    const auto name = entry.path().filename().string();
    if (entry.is_directory(ec)) {
      if (is_excluded_dir(entry.path()) || matches_any(options.exclude_globs, rel, name))
        it.disable_recursion_pending();
      continue;
    }
    if (!entry.is_regular_file(ec) || matches_any(options.exclude_globs, rel, name))
      continue;
    const bool at_root = rel.find('/') == std::string::npos;
    if (at_root && name == "pyproject.toml")
      found.push_back({rel, FileKind::PyProjectToml});
    else if (at_root && name == "setup.cfg")
      found.push_back({rel, FileKind::SetupCfg});
    else if (at_root && name == "setup.py")
      found.push_back({rel, FileKind::SetupPy});
    else if (is_requirements_name(name))
      found.push_back({rel, FileKind::Requirements});
    else if (is_environment_name(name))
      found.push_back({rel, FileKind::YamlEnv});
    else if (is_lock_name(name))
      d.lock_files.push_back(rel);
    else if (is_mention_name(name))
      d.mention_files.push_back(rel);
    if (text::lower(name).ends_with(".py"))
      d.python_sources.push_back(rel);
  }

  std::set<std::string> known;
  for (const auto &f : found)
    known.insert(f.rel);

  // Resolves a path named inside `from` to a project-relative path, or
  // nullopt when it escapes the tree or does not exist.
  auto resolve_ref = [&](const std::string &from, const std::string &ref, bool relative_to_file) -> std::optional<std::string> {
    fs::path base = relative_to_file ? fs::path(from).parent_path() : fs::path();
    auto rel = (base / ref).lexically_normal().generic_string();
    if (rel.empty() || rel.starts_with("..") || fs::path(ref).is_absolute())
      return std::nullopt;
    std::error_code e;
    if (!fs::is_regular_file(d.root / rel, e))
      return std::nullopt;
    return rel;
  };

  auto parse_one = [&](const std::string &rel, FileKind kind, bool auxiliary) {
    ConfigFile cf;
    cf.path = rel;
    cf.file_kind = kind;
    cf.auxiliary = auxiliary;
    std::vector<std::string> local;
    std::vector<std::string> refs;
    try {
      const auto content = decode(text::read_file(d.root / rel), rel, &local);
      switch (kind) {
      case FileKind::Requirements:
        cf.specs = parse_requirements_file(content, rel, &local);
        break;
      case FileKind::PyProjectToml: {
        cf.specs = parse_pyproject(content, rel, &local);
        const auto doc = toml::parse(content);
        refs = pyproject_referenced_files(doc);
        if (!d.project_name) {
          const toml::Value *name = doc.root.at_path({"project", "name"});
          if (!name || !name->is_string())
            name = doc.root.at_path({"tool", "poetry", "name"});
          if (name && name->is_string()) {
            try {
              d.project_name = normalize_name(name->string);
            } catch (const Error &) {
            }
          }
        }
        break;
      }
      case FileKind::SetupCfg: {
        cf.specs = parse_setup_cfg(content, rel, &local);
        const auto doc = ini::parse(content);
        refs = setup_cfg_referenced_files(doc);
        if (!d.project_name) {
          if (const auto *meta = doc.find("metadata")) {
            if (const auto *n = meta->find("name"); n && !n->values.empty()) {
              try {
                d.project_name = normalize_name(n->values.front().text);
              } catch (const Error &) {
              }
            }
          }
        }
        break;
      }
      case FileKind::SetupPy: {
        auto r = parse_setup_py_static(content, rel, &local);
        cf.specs = std::move(r.specs);
        cf.dynamic_anchor_line = r.anchor_line;
        if (r.failed)
          cf.parse_status = ParseStatus::Failed;
        else if (r.dynamic)
          cf.parse_status = ParseStatus::Dynamic;
        if (!r.project_name.empty() && !d.project_name) {
          try {
            d.project_name = normalize_name(r.project_name);
          } catch (const Error &) {
          }
        }
        refs = std::move(r.referenced_files);
        break;
      }
      case FileKind::YamlEnv:
        cf.specs = parse_environment_yaml(content, rel, &local);
        break;
      default:
        break;
      }
      if (cf.parse_status == ParseStatus::Parsed && !local.empty())
        cf.parse_status = ParseStatus::PartiallyParsed;
    } catch (const Error &e) {
      cf.parse_status = ParseStatus::Failed;
      cf.specs.clear();
      local.push_back(rel + ": skipped: " + e.what());
    }
    d.warnings.insert(d.warnings.end(), local.begin(), local.end());
    d.config_files.push_back(std::move(cf));
    return refs;
  };

  // Project metadata files first so the project name is known early.
  std::stable_sort(found.begin(), found.end(), [](const Found &a, const Found &b) {
    auto rank = [](FileKind k) { return k == FileKind::PyProjectToml ? 0 : k == FileKind::SetupCfg ? 1 : k == FileKind::SetupPy ? 2 : 3; };
    return rank(a.kind) < rank(b.kind);
  });

  std::vector<std::string> referenced;
  std::vector<std::string> included;
  for (const auto &f : found) {
    auto refs = parse_one(f.rel, f.kind, false);
    for (const auto &r : refs) {
      if (auto rel = resolve_ref(f.rel, r, false))
        referenced.push_back(*rel);
    }
    if (f.kind != FileKind::Requirements)
      continue;
    std::string content;
    try {
      content = text::read_file(d.root / f.rel);
    } catch (const Error &) {
      continue;
    }
    for (const auto &logical : requirement_logical_lines(content)) {
      if (auto target = requirement_include(logical.text)) {
        if (auto rel = resolve_ref(f.rel, *target, true))
          included.push_back(*rel);
      }
    }
  }
  for (const auto &rel : included) {
    if (known.insert(rel).second)
      parse_one(rel, FileKind::Requirements, false);
  }
  for (const auto &rel : referenced) {
    if (known.insert(rel).second)
      parse_one(rel, FileKind::Requirements, true);
  }

  std::sort(d.config_files.begin(), d.config_files.end(),
            [](const ConfigFile &a, const ConfigFile &b) { return a.path < b.path; });
  std::sort(d.lock_files.begin(), d.lock_files.end());
  std::sort(d.mention_files.begin(), d.mention_files.end());
  std::sort(d.python_sources.begin(), d.python_sources.end());
  return d;
}

StaticResolution static_dependency_set(const Discovery &discovery) {
  StaticResolution r;
  for (const auto &file : discovery.config_files) {
    if (file.parse_status == ParseStatus::Dynamic || file.parse_status == ParseStatus::Failed) {
      if (file.file_kind == FileKind::SetupPy)
        r.has_dynamic_setup = true;
    }
    for (const auto &spec : file.specs) {
      if (discovery.project_name && spec.name == *discovery.project_name)
        continue;
      auto add = [&](std::map<std::string, Declaration> &into) {
        auto &decl = into[spec.name.normalized()];
        if (decl.locations.empty())
          decl.name = spec.name;
        if (std::find(decl.locations.begin(), decl.locations.end(), spec.location) == decl.locations.end())
          decl.locations.push_back(spec.location);
      };
      add(r.declarations);
      if (!file.auxiliary)
        add(r.dependencies);
    }
  }
  return r;
}

} // namespace pytrim
