#include "generators.hpp"

#include "pytrim/detector.hpp"
#include "pytrim/ini.hpp"
#include "pytrim/python_source.hpp"
#include "pytrim/remover.hpp"
#include "pytrim/resolver_static.hpp"
#include "pytrim/text.hpp"
#include "pytrim/toml.hpp"

#include <regex>

using namespace pytrim;

namespace gen {

namespace {

const std::vector<std::string> kDistributions = {"rich",  "click",          "requests", "prettytable", "PyYAML",
                                                 "Flask-Login", "zope.interface", "numpy", "six", "tabulate",
                                                 "docopt", "attrs"};

const std::vector<std::string> kModules = {"rich", "click", "requests", "prettytable", "yaml", "six",
                                           "numpy", "attr", "tabulate", "os", "json", "sys"};

template <typename T> const T &pick(const std::vector<T> &v, std::mt19937 &rng) { return v[rng() % v.size()]; }

bool chance(std::mt19937 &rng, int percent) { return static_cast<int>(rng() % 100) < percent; }

std::string variant(const std::string &name, std::mt19937 &rng) {
  std::string out;
  const int mode = static_cast<int>(rng() % 4);
  for (char c : name) {
    if (c == '-' || c == '_' || c == '.') {
      if (mode == 1)
        c = '_';
      else if (mode == 2 && c != '.')
        c = '-';
    }
    if (mode == 3)
      c = text::to_upper(c);
    out += c;
  }
  return out;
}

std::string requirement(const std::string &raw, std::mt19937 &rng, bool allow_paren = true) {
  static const std::vector<std::string> constraints = {"", "", "==1.0", ">=2", " >= 1.2, <3", "~=0.6", "!=1.5"};
  std::string s = raw;
  if (chance(rng, 15))
    s += "[socks]";
  const auto constraint = pick(constraints, rng);
  if (allow_paren && !constraint.empty() && chance(rng, 10))
    s += " (" + std::string(text::trim(constraint)) + ")";
  else
    s += constraint;
  if (chance(rng, 15))
    s += chance(rng, 50) ? "; python_version >= \"3.8\"" : " ; sys_platform == \"linux\"";
  return s;
}

std::vector<std::string> distinct_names(std::mt19937 &rng, int min, int max) {
  auto pool = kDistributions;
  std::shuffle(pool.begin(), pool.end(), rng);
  const int n = min + static_cast<int>(rng() % static_cast<unsigned>(max - min + 1));
  pool.resize(static_cast<std::size_t>(n));
  return pool;
}

Sample gen_requirements(std::mt19937 &rng) {
  Sample s;
  const std::string eol = chance(rng, 15) ? "\r\n" : "\n";
  const int lines = 1 + static_cast<int>(rng() % 10);
  for (int i = 0; i < lines; ++i) {
    const int kind = static_cast<int>(rng() % 10);
    if (kind == 0) {
      s.content += "# " + std::string(chance(rng, 50) ? "runtime deps" : "pinned for ci") + eol;
    } else if (kind == 1) {
      s.content += eol;
    } else if (kind == 2) {
      s.content += chance(rng, 50) ? "--index-url https://pypi.org/simple" + eol : "-r base.txt" + eol;
    } else {
      const auto raw = variant(pick(kDistributions, rng), rng);
      s.names.push_back(raw);
      const int shape = static_cast<int>(rng() % 6);
      if (shape == 0) {
        s.content += raw + " \\" + eol + "    ==1.0" + eol;
      } else if (shape == 1) {
        s.content += raw + "==1.0 \\" + eol + "    --hash=sha256:abc123" + eol;
      } else if (shape == 2) {
        s.content += requirement(raw, rng) + "  # note" + eol;
      } else if (shape == 3) {
        s.content += raw + "==2.0" + eol + "    # via -r requirements.in" + eol;
      } else {
        s.content += requirement(raw, rng) + eol;
      }
    }
  }
  if (s.names.empty()) {
    s.names.push_back("rich");
    s.content += "rich" + eol;
  }
  if (chance(rng, 15) && s.content.ends_with(eol))
    s.content.resize(s.content.size() - eol.size());
  return s;
}

std::string toml_string(const std::string &v, std::mt19937 &rng) {
  const bool literal = v.find('"') != std::string::npos || chance(rng, 25);
  return literal ? "'" + v + "'" : "\"" + v + "\"";
}

std::string toml_array(const std::vector<std::string> &items, std::mt19937 &rng, const std::string &indent) {
  if (items.size() <= 3 && chance(rng, 40)) {
    std::string out = "[";
    for (std::size_t i = 0; i < items.size(); ++i)
      out += (i ? ", " : "") + toml_string(items[i], rng);
    return out + "]";
  }
  std::string out = "[\n";
  for (std::size_t i = 0; i < items.size(); ++i) {
    out += indent + toml_string(items[i], rng);
    if (i + 1 < items.size() || chance(rng, 70))
      out += ",";
    if (chance(rng, 15))
      out += "  # why";
    out += "\n";
  }
  return out + "]";
}

Sample gen_pyproject(std::mt19937 &rng) {
  Sample s;
  s.content = "[build-system]\nrequires = [\"setuptools>=61\"]\nbuild-backend = \"setuptools.build_meta\"\n\n";
  const bool pep621 = chance(rng, 75);
  const bool poetry = !pep621 || chance(rng, 35);
  auto names = distinct_names(rng, 3, 10);
  std::size_t next = 0;
  auto take = [&](int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n && next < names.size(); ++i)
      out.push_back(names[next++]);
    return out;
  };
  if (pep621) {
    s.content += "[project]\nname = \"gen\"\nversion = \"0.1.0\"\n";
    std::vector<std::string> deps;
    for (const auto &n : take(1 + static_cast<int>(rng() % 3))) {
      const auto raw = variant(n, rng);
      s.names.push_back(raw);
      deps.push_back(requirement(raw, rng, false));
    }
    s.content += "dependencies = " + toml_array(deps, rng, chance(rng, 50) ? "    " : "  ") + "\n";
    if (chance(rng, 70)) {
      s.content += "\n[project.optional-dependencies]\n";
      for (const char *group : {"docs", "test"}) {
        std::vector<std::string> items;
        for (const auto &n : take(1 + static_cast<int>(rng() % 2))) {
          const auto raw = variant(n, rng);
          s.names.push_back(raw);
          items.push_back(raw);
        }
        if (!items.empty())
          s.content += std::string(group) + " = " + toml_array(items, rng, "  ") + "\n";
      }
    }
    s.content += "\n";
  }
  if (poetry) {
    auto key = [](const std::string &n) { return n.find('.') != std::string::npos ? "\"" + n + "\"" : n; };
    s.content += "[tool.poetry.dependencies]\npython = \"^3.9\"\n";
    for (const auto &n : take(1 + static_cast<int>(rng() % 3))) {
      const auto raw = variant(n, rng);
      s.names.push_back(raw);
      if (chance(rng, 30))
        s.content += key(raw) + " = { version = \"^1.0\", optional = true }\n";
      else
        s.content += key(raw) + " = \"^1.0\"\n";
    }
    if (chance(rng, 50)) {
      s.content += "\n[tool.poetry.group.dev.dependencies]\n";
      for (const auto &n : take(1 + static_cast<int>(rng() % 2))) {
        const auto raw = variant(n, rng);
        s.names.push_back(raw);
        s.content += key(raw) + " = \"*\"\n";
      }
    }
    if (chance(rng, 40)) {
      for (const auto &n : take(1)) {
        const auto raw = variant(n, rng);
        s.names.push_back(raw);
        s.content += "\n[tool.poetry.dependencies." + key(raw) + "]\nversion = \"^2\"\noptional = true\n";
      }
    }
    if (chance(rng, 30))
      s.content += "\n[tool.black]\nline-length = 100\n";
  }
  return s;
}

Sample gen_setup_cfg(std::mt19937 &rng) {
  Sample s;
  s.content = "[metadata]\nname = gen\nversion = 0.1\n\n[options]\npackages = find:\n";
  auto names = distinct_names(rng, 2, 8);
  std::size_t next = 0;
  const int install = 1 + static_cast<int>(rng() % 4);
  if (install == 1 && chance(rng, 40)) {
    const auto raw = variant(names[next++], rng);
    s.names.push_back(raw);
    s.content += "install_requires = " + requirement(raw, rng) + "\n";
  } else {
    s.content += "install_requires =\n";
    for (int i = 0; i < install && next < names.size(); ++i) {
      const auto raw = variant(names[next++], rng);
      s.names.push_back(raw);
      if (chance(rng, 15))
        s.content += "    # pinned below\n";
      s.content += "    " + requirement(raw, rng) + "\n";
    }
  }
  s.content += "python_requires = >=3.8\n";
  if (next < names.size() && chance(rng, 70)) {
    s.content += "\n[options.extras_require]\n";
    if (chance(rng, 50)) {
      std::vector<std::string> items;
      for (int i = 0; i < 2 && next < names.size(); ++i) {
        items.push_back(variant(names[next++], rng));
        s.names.push_back(items.back());
      }
      s.content += "docs = " + text::join(items, ", ") + "\n";
    }
    if (next < names.size()) {
      s.content += "test =\n";
      for (int i = 0; i < 2 && next < names.size(); ++i) {
        const auto raw = variant(names[next++], rng);
        s.names.push_back(raw);
        s.content += "    " + raw + "\n";
      }
    }
  }
  if (chance(rng, 30))
    s.content += "\n[flake8]\nmax-line-length = 100\n";
  return s;
}

std::string py_list(const std::vector<std::string> &items, std::mt19937 &rng, const std::string &indent) {
  const char q = chance(rng, 50) ? '\'' : '"';
  auto lit = [&](const std::string &v) { return v.find(q) == std::string::npos ? q + v + q : "'" + v + "'"; };
  if (items.size() <= 3 && chance(rng, 40)) {
    std::string out = "[";
    for (std::size_t i = 0; i < items.size(); ++i)
      out += (i ? ", " : "") + lit(items[i]);
    return out + "]";
  }
  std::string out = "[\n";
  for (std::size_t i = 0; i < items.size(); ++i) {
    out += indent + "    " + lit(items[i]);
    if (i + 1 < items.size() || chance(rng, 80))
      out += ",";
    if (chance(rng, 10))
      out += "  # note";
    out += "\n";
  }
  return out + indent + "]";
}

Sample gen_setup_py(std::mt19937 &rng) {
  Sample s;
  auto names = distinct_names(rng, 2, 9);
  std::size_t next = 0;
  s.content = "from setuptools import setup, find_packages\n\nsetup(\n    name='gen',\n    version='0.1',\n"
              "    packages=find_packages(),\n";
  std::vector<std::string> install;
  const int n = 1 + static_cast<int>(rng() % 4);
  for (int i = 0; i < n && next < names.size(); ++i) {
    const auto raw = variant(names[next++], rng);
    s.names.push_back(raw);
    install.push_back(requirement(raw, rng));
  }
  s.content += "    install_requires=" + py_list(install, rng, "    ") + ",\n";
  if (next < names.size() && chance(rng, 70)) {
    s.content += "    extras_require={\n";
    for (const char *group : {"docs", "test"}) {
      std::vector<std::string> items;
      for (int i = 0; i < 2 && next < names.size(); ++i) {
        items.push_back(variant(names[next++], rng));
        s.names.push_back(items.back());
      }
      if (!items.empty())
        s.content += "        '" + std::string(group) + "': " + py_list(items, rng, "        ") + ",\n";
    }
    s.content += "    },\n";
  }
  if (chance(rng, 30))
    s.content += "    zip_safe=False,\n";
  s.content += ")\n";
  return s;
}

Sample gen_environment_yaml(std::mt19937 &rng) {
  Sample s;
  s.content = "name: gen\nchannels:\n  - conda-forge\ndependencies:\n  - python=3.11\n";
  auto names = distinct_names(rng, 2, 7);
  std::size_t next = 0;
  const int conda = 1 + static_cast<int>(rng() % 3);
  for (int i = 0; i < conda && next < names.size(); ++i) {
    const auto raw = text::lower(names[next++]);
    s.names.push_back(raw);
    static const std::vector<std::string> forms = {"", "=1.2", ">=1.0", "::"};
    const auto form = pick(forms, rng);
    if (form == "::")
      s.content += "  - conda-forge::" + raw + "\n";
    else
      s.content += "  - " + raw + form + (chance(rng, 15) ? "  # conda" : "") + "\n";
  }
  if (next < names.size() && chance(rng, 75)) {
    s.content += "  - pip\n  - pip:\n";
    const std::string indent = chance(rng, 50) ? "      " : "    ";
    for (int i = 0; i < 3 && next < names.size(); ++i) {
      const auto raw = variant(names[next++], rng);
      s.names.push_back(raw);
      s.content += indent + "- " + requirement(raw, rng) + "\n";
    }
  }
  return s;
}

Sample gen_python(std::mt19937 &rng) {
  Sample s;
  std::set<std::string> used;
  auto module = [&]() {
    const auto &m = pick(kModules, rng);
    used.insert(m);
    return m;
  };
  if (chance(rng, 30))
    s.content += "\"\"\"Generated module.\"\"\"\n";
  const int statements = 1 + static_cast<int>(rng() % 8);
  for (int i = 0; i < statements; ++i) {
    switch (rng() % 14) {
    case 0:
      s.content += "import " + module() + "\n";
      break;
    case 1:
      s.content += "import " + module() + ", " + module() + "\n";
      break;
    case 2:
      s.content += "import " + module() + " as alias" + std::to_string(i) + "\n";
      break;
    case 3:
      s.content += "from " + module() + " import thing\n";
      break;
    case 4:
      s.content += "from " + module() + ".sub import (a,\n    b as c)\n";
      break;
    case 5:
      s.content += "import " + module() + "; import " + module() + "\n";
      break;
    case 6:
      s.content += "x = 1; import " + module() + "\n";
      break;
    case 7: {
      const auto m = module();
      s.content += "try:\n    import " + m + "\nexcept ImportError:\n    " + m + " = None\n";
      break;
    }
    case 8:
      s.content += "if TYPE_CHECKING:\n    import " + module() + "\n";
      break;
    case 9:
      s.content += "\n\ndef f" + std::to_string(i) + "():\n    import " + module() + "\n    return 1\n";
      break;
    case 10:
      s.content += "if flag: import " + module() + "\n";
      break;
    case 11:
      s.content += "class C" + std::to_string(i) + ":\n    def m(self):\n        from " + module() +
                   " import x  # lazy\n";
      break;
    case 12:
      s.content += "# imports below\n";
      break;
    default:
      s.content += "from . import local\n";
    }
  }
  if (used.empty()) {
    s.content += "import rich\n";
    used.insert("rich");
  }
  s.names.assign(used.begin(), used.end());
  return s;
}

std::string spec_entry(const RequirementSpec &spec) {
  return spec.name.normalized() + "|" + text::join({spec.extras.begin(), spec.extras.end()}, ",") + "|" +
         spec.version_constraint + "|" + spec.marker.value_or("") + "|" + spec.location.detail;
}

std::string normalize_token_text(std::string_view line) {
  std::string out;
  for (char c : line)
    out += (c == '_' || c == '.') ? '-' : text::to_lower(c);
  return out;
}

std::vector<std::string> tokens(std::string_view line, bool python) {
  std::vector<std::string> out;
  std::string cur;
  auto is_token_char = [&](char c) { return text::is_alnum(c) || (python ? c == '_' : c == '-'); };
  const std::string norm = python ? std::string(line) : normalize_token_text(line);
  for (char c : norm) {
    if (is_token_char(c)) {
      cur += c;
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty())
    out.push_back(cur);
  return out;
}

bool structural(std::string_view raw_line) {
  static const std::regex closer(R"(^[\]\)\}]+,?$)");
  static const std::regex opener(R"(^['"]?[A-Za-z0-9_.-]+['"]?\s*[:=]\s*[\[\(\{]?\s*(#.*)?$)");
  const std::string t(text::trim(text::chomp(raw_line)));
  if (t == "- pip:")
    return true;
  if (!raw_line.empty() && (raw_line[0] == ' ' || raw_line[0] == '\t') && t.starts_with("#"))
    return true;
  return std::regex_match(t, closer) || std::regex_match(t, opener);
}

bool header_names(std::string_view header, const std::vector<std::string> &names) {
  std::string key;
  for (char c : header) {
    if (c != '[' && c != ']' && c != '"' && c != '\'')
      key += c;
  }
  const auto norm = normalize_token_text(key);
  for (const auto &n : names) {
    if (norm.ends_with("-" + normalize_name(n).normalized()))
      return true;
  }
  return false;
}

} // namespace

const char *name(Format f) {
  switch (f) {
  case Format::Requirements:
    return "requirements";
  case Format::PyProject:
    return "pyproject.toml";
  case Format::SetupCfg:
    return "setup.cfg";
  case Format::SetupPy:
    return "setup.py";
  case Format::EnvironmentYaml:
    return "environment.yml";
  case Format::PythonSource:
    return "python source";
  }
  return "?";
}

FileKind file_kind(Format f) {
  switch (f) {
  case Format::Requirements:
    return FileKind::Requirements;
  case Format::PyProject:
    return FileKind::PyProjectToml;
  case Format::SetupCfg:
    return FileKind::SetupCfg;
  case Format::SetupPy:
    return FileKind::SetupPy;
  case Format::EnvironmentYaml:
    return FileKind::YamlEnv;
  case Format::PythonSource:
    return FileKind::PythonSource;
  }
  return FileKind::Unmodifiable;
}

Sample generate(Format f, std::mt19937 &rng) {
  switch (f) {
  case Format::Requirements:
    return gen_requirements(rng);
  case Format::PyProject:
    return gen_pyproject(rng);
  case Format::SetupCfg:
    return gen_setup_cfg(rng);
  case Format::SetupPy:
    return gen_setup_py(rng);
  case Format::EnvironmentYaml:
    return gen_environment_yaml(rng);
  case Format::PythonSource:
    return gen_python(rng);
  }
  return {};
}

std::vector<std::string> pick_removal(const Sample &s, std::mt19937 &rng) {
  if (chance(rng, 8))
    return {"absent-package"};
  std::vector<std::string> out = {pick(s.names, rng)};
  if (s.names.size() > 1 && chance(rng, 40))
    out.push_back(pick(s.names, rng));
  return out;
}

std::string remove(Format f, const std::string &content, const std::vector<std::string> &names) {
  if (f == Format::PythonSource)
    return remove_imports_from_source(content, std::set<std::string>(names.begin(), names.end()));
  PackageSet set;
  for (const auto &n : names)
    set.insert(normalize_name(n));
  return remove_from(file_kind(f), content, set);
}

bool reparses(Format f, const std::string &content) {
  try {
    switch (f) {
    case Format::Requirements:
    {
      std::vector<std::string> warnings;
      parse_requirements_file(content, "requirements.txt", &warnings);
      return warnings.empty();
    }
    case Format::PyProject:
      toml::parse(content);
      return true;
    case Format::SetupCfg:
      ini::parse(content);
      return true;
    case Format::SetupPy:
      python::validate(content);
      return !parse_setup_py_static(content).failed;
    case Format::EnvironmentYaml:
      parse_environment_yaml(content, "environment.yml");
      return true;
    case Format::PythonSource:
      python::validate(content);
      return true;
    }
  } catch (const Error &) {
    return false;
  }
  return false;
}

std::vector<std::string> semantic_entries(Format f, const std::string &content) {
  std::vector<RequirementSpec> specs;
  switch (f) {
  case Format::Requirements:
    specs = parse_requirements_file(content, "requirements.txt");
    break;
  case Format::PyProject:
    specs = parse_pyproject(content);
    break;
  case Format::SetupCfg:
    specs = parse_setup_cfg(content);
    break;
  case Format::SetupPy:
    specs = parse_setup_py_static(content).specs;
    break;
  case Format::EnvironmentYaml:
    specs = parse_environment_yaml(content, "environment.yml");
    break;
  case Format::PythonSource: {
    std::vector<std::string> out;
    for (const auto &b : scan_source(content, "m.py")) {
      std::string aliases;
      for (const auto &[n, a] : b.aliased_names)
        aliases += n + "=" + a.value_or("") + ",";
      out.push_back(b.top_level + "|" + b.module_path + "|" + std::string(to_string(b.kind)) + "|" + aliases);
    }
    return out;
  }
  }
  std::vector<std::string> out;
  for (const auto &s : specs)
    out.push_back(spec_entry(s));
  return out;
}

bool entry_names(Format f, const std::string &entry, const std::vector<std::string> &names) {
  const auto head = entry.substr(0, entry.find('|'));
  for (const auto &n : names) {
    if (f == Format::PythonSource ? head == n : head == normalize_name(n).normalized())
      return true;
  }
  return false;
}

bool line_mentions(Format f, std::string_view line, const std::vector<std::string> &names) {
  const bool python = f == Format::PythonSource;
  const auto toks = tokens(line, python);
  for (const auto &n : names) {
    const auto wanted = python ? n : normalize_name(n).normalized();
    if (std::find(toks.begin(), toks.end(), wanted) != toks.end())
      return true;
  }
  return false;
}

std::optional<std::string> non_interference_violation(Format f, const std::string &before, const std::string &after,
                                                      const std::vector<std::string> &names) {
  const auto in = text::split_lines(before);
  const auto out = text::split_lines(after);

  std::vector<bool> owned(in.size(), false);
  bool in_removed_table = false;
  int open_brackets = 0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    const auto body = text::trim(text::chomp(in[i]));
    if (f == Format::PyProject && body.starts_with("["))
      in_removed_table = header_names(body, names);
    const bool prev = i > 0 && owned[i - 1];
    const bool prev_continues = prev && text::trim(text::chomp(in[i - 1])).ends_with("\\");
    const bool annotation = f == Format::Requirements && prev && body.starts_with("#") && !in[i].empty() &&
                            text::is_space(in[i][0]);
    owned[i] = in_removed_table || prev_continues || annotation || open_brackets > 0 || line_mentions(f, in[i], names);
    if (f == Format::PythonSource) {
      const int depth = static_cast<int>(std::count(in[i].begin(), in[i].end(), '(')) -
                        static_cast<int>(std::count(in[i].begin(), in[i].end(), ')'));
      open_brackets = owned[i] ? std::max(0, open_brackets + depth) : 0;
    }
  }
  // First line in the given direction that is not itself structural.
  auto neighbour_owned = [&](std::size_t i, int step) {
    for (auto k = static_cast<long>(i) + step; k >= 0 && k < static_cast<long>(in.size()); k += step) {
      if (owned[static_cast<std::size_t>(k)])
        return true;
      if (!structural(in[static_cast<std::size_t>(k)]))
        return false;
    }
    return false;
  };

  std::size_t j = 0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (owned[i])
      continue;
    const bool beside_removed = neighbour_owned(i, -1) || neighbour_owned(i, 1);
    if (beside_removed && structural(in[i]))
      continue;
    bool found = false;
    while (j < out.size() && !found) {
      const bool last = j + 1 == out.size();
      found = last ? text::chomp(out[j]) == text::chomp(in[i]) : out[j] == in[i];
      ++j;
    }
    if (!found)
      return std::string(in[i]);
  }
  return std::nullopt;
}

} // namespace gen
