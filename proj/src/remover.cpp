#include "pytrim/remover.hpp"

#include "pytrim/detector.hpp"
#include "pytrim/diff.hpp"
#include "pytrim/ini.hpp"
#include "pytrim/python_source.hpp"
#include "pytrim/setup_py.hpp"
#include "pytrim/text.hpp"
#include "pytrim/toml.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <map>
#include <optional>

namespace pytrim {

namespace fs = std::filesystem;

namespace {

// Byte-range edits applied in one pass. Overlapping erasures merge.
class Splice {
public:
  void erase(std::size_t begin, std::size_t end) {
    if (begin < end)
      ops_.push_back({begin, end, std::nullopt});
  }
  void replace(std::size_t begin, std::size_t end, std::string with) { ops_.push_back({begin, end, std::move(with)}); }
  bool empty() const { return ops_.empty(); }

  std::string apply(std::string_view s) const {
    auto ops = ops_;
    std::stable_sort(ops.begin(), ops.end(), [](const Op &a, const Op &b) { return a.begin < b.begin; });
    std::string out;
    std::size_t cursor = 0;
    for (const auto &op : ops) {
      if (op.end <= cursor && op.begin < cursor)
        continue;
      const auto begin = std::max(op.begin, cursor);
      out.append(s.substr(cursor, begin - cursor));
      if (op.with)
        out += *op.with;
      cursor = std::max(cursor, op.end);
    }
    out.append(s.substr(std::min(cursor, s.size())));
    return out;
  }

private:
  struct Op {
    std::size_t begin;
    std::size_t end;
    std::optional<std::string> with;
  };
  std::vector<Op> ops_;
};

bool is_blank(char c) { return c == ' ' || c == '\t'; }

std::size_t line_begin(std::string_view s, std::size_t pos) {
  while (pos > 0 && s[pos - 1] != '\n')
    --pos;
  return pos;
}

std::size_t line_after(std::string_view s, std::size_t pos) {
  const auto nl = s.find('\n', pos);
  return nl == std::string_view::npos ? s.size() : nl + 1;
}

bool only_blanks(std::string_view s, std::size_t begin, std::size_t end) {
  for (auto i = begin; i < end; ++i) {
    if (!is_blank(s[i]))
      return false;
  }
  return true;
}

bool at_eol(std::string_view s, std::size_t p) { return p >= s.size() || s[p] == '\n' || s[p] == '\r'; }

// If [begin, end) sits alone on its lines (optionally followed by a comma
// and a comment), returns the whole-line range covering it.
std::optional<std::pair<std::size_t, std::size_t>> own_line_range(std::string_view s, std::size_t begin,
                                                                  std::size_t end) {
  const auto ls = line_begin(s, begin);
  if (!only_blanks(s, ls, begin))
    return std::nullopt;
  auto p = end;
  while (p < s.size() && is_blank(s[p]))
    ++p;
  if (p < s.size() && s[p] == ',')
    ++p;
  while (p < s.size() && is_blank(s[p]))
    ++p;
  if (p < s.size() && s[p] == '#') {
    while (!at_eol(s, p))
      ++p;
  }
  if (!at_eol(s, p))
    return std::nullopt;
  return std::make_pair(ls, line_after(s, p));
}

struct ListItem {
  std::size_t begin;
  std::size_t end;
  bool remove;
};

// Removes items from a comma separated display (list, dict or inline table).
// Items alone on their line lose the whole line; inline items lose one
// adjacent comma.
void excise_items(std::string_view s, const std::vector<ListItem> &items, Splice &splice) {
  const auto n = items.size();
  std::vector<bool> inline_removed(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (!items[i].remove)
      continue;
    if (auto range = own_line_range(s, items[i].begin, items[i].end))
      splice.erase(range->first, range->second);
    else
      inline_removed[i] = true;
  }
  std::size_t i = 0;
  while (i < n) {
    if (!inline_removed[i]) {
      ++i;
      continue;
    }
    auto j = i;
    while (j + 1 < n && inline_removed[j + 1])
      ++j;
    bool kept_after = false;
    for (auto k = j + 1; k < n; ++k)
      kept_after = kept_after || !items[k].remove;

    if (kept_after) {
      for (auto k = i; k <= j; ++k) {
        auto p = items[k].end;
        while (p < s.size() && is_blank(s[p]))
          ++p;
        if (p < s.size() && s[p] == ',')
          ++p;
        auto q = p;
        while (q < s.size() && is_blank(s[q]))
          ++q;
        if (at_eol(s, q) || s[q] == '#') {
          auto b = items[k].begin;
          while (b > 0 && is_blank(s[b - 1]))
            --b;
          splice.erase(b, p);
        } else {
          splice.erase(items[k].begin, q);
        }
      }
    } else {
      auto start = items[i].begin;
      auto b = start;
      while (b > 0 && is_blank(s[b - 1]))
        --b;
      if (b > 0 && s[b - 1] == ',')
        start = b - 1;
      splice.erase(start, items[j].end);
    }
    i = j + 1;
  }
}

bool names_package(std::string_view requirement, const PackageSet &packages) {
  try {
    const auto spec = parse_requirement_line(requirement);
    return spec && packages.count(spec->name);
  } catch (const Error &) {
    return false;
  }
}

bool key_names_package(std::string_view key, const PackageSet &packages) {
  try {
    return packages.count(normalize_name(key)) > 0;
  } catch (const Error &) {
    return false;
  }
}

// Line based rebuild: drops and replaces whole 1-based lines.
std::string rewrite_lines(std::string_view content, const std::set<int> &drop,
                          const std::map<int, std::string> &replace) {
  std::string out;
  const auto lines = text::split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    if (drop.count(number))
      continue;
    if (auto it = replace.find(number); it != replace.end()) {
      const auto body = text::chomp(lines[i]);
      out += it->second;
      out.append(lines[i].substr(body.size()));
      continue;
    }
    out.append(lines[i]);
  }
  return std::move(out);
}

// --- TOML -------------------------------------------------------------------

void erase_toml_entry(std::string_view s, const toml::Document &doc, const std::vector<std::string> &path,
                      const toml::Value &value, Splice &splice) {
  if (value.is_table() && value.dotted_defined) {
    for (const auto &[key, child] : value.table) {
      auto child_path = path;
      child_path.push_back(key);
      erase_toml_entry(s, doc, child_path, child, splice);
    }
    return;
  }
  if (value.key_begin != toml::npos) {
    auto range = own_line_range(s, value.key_begin, value.end);
    if (!range)
      fail(ErrorKind::TomlSyntaxError, "entry shares its line with other content");
    splice.erase(range->first, range->second);
    return;
  }
  // Header-defined sub-table, plus any tables nested below it.
  for (const auto &h : doc.headers) {
    if (h.path.size() >= path.size() && std::equal(path.begin(), path.end(), h.path.begin()))
      splice.erase(h.begin, h.section_end);
  }
}

void remove_from_toml_array(std::string_view s, const toml::Value &array, const PackageSet &packages,
                            Splice &splice) {
  std::vector<ListItem> items;
  for (const auto &item : array.array)
    items.push_back({item.begin, item.end, item.is_string() && names_package(item.string, packages)});
  excise_items(s, items, splice);
}

bool all_named(const toml::Value &array, const PackageSet &packages) {
  return !array.array.empty() && std::all_of(array.array.begin(), array.array.end(), [&](const toml::Value &v) {
    return v.is_string() && names_package(v.string, packages);
  });
}

void remove_poetry_keys(std::string_view s, const toml::Document &doc, const toml::Value *table,
                        const std::vector<std::string> &path, const PackageSet &packages, Splice &splice) {
  if (!table || !table->is_table())
    return;
  if (table->inline_table) {
    std::vector<ListItem> items;
    for (const auto &[key, value] : table->table)
      items.push_back({value.key_begin, value.end, text::lower(key) != "python" && key_names_package(key, packages)});
    excise_items(s, items, splice);
    return;
  }
  for (const auto &[key, value] : table->table) {
    if (text::lower(key) == "python" || !key_names_package(key, packages))
      continue;
    auto entry_path = path;
    entry_path.push_back(key);
    erase_toml_entry(s, doc, entry_path, value, splice);
  }
}

// --- Python -----------------------------------------------------------------

std::string indentation_of(std::string_view s, std::size_t pos) {
  const auto ls = line_begin(s, pos);
  return std::string(s.substr(ls, pos - ls));
}

std::string eol_at(std::string_view s, std::size_t line_end) {
  if (line_end >= 2 && s.substr(line_end - 2, 2) == "\r\n")
    return "\r\n";
  if (line_end >= 1 && s[line_end - 1] == '\n')
    return "\n";
  return "";
}

// --- YAML -------------------------------------------------------------------

bool has_anchor_or_alias(std::string_view content) {
  for (auto line : text::split_lines(content)) {
    line = text::chomp(line);
    char quote = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quote) {
        if (c == quote)
          quote = 0;
        continue;
      }
      if (c == '"' || c == '\'') {
        if (i == 0 || text::is_space(line[i - 1]) || std::string_view("[{,:-").find(line[i - 1]) != std::string_view::npos)
          quote = c;
        continue;
      }
      if (c == '#' && (i == 0 || text::is_space(line[i - 1])))
        break;
      if ((c == '&' || c == '*') && (i == 0 || text::is_space(line[i - 1]) ||
                                     std::string_view("[{,").find(line[i - 1]) != std::string_view::npos)) {
        if (i + 1 < line.size() && !text::is_space(line[i + 1]))
          return true;
      }
    }
  }
  return false;
}

bool is_block_item_line(std::string_view content, const text::LineIndex &index, int line) {
  const auto body = text::trim(text::chomp(content.substr(index.line_start(line), index.line_end(line) - index.line_start(line))));
  return body.starts_with("- ") || body == "-";
}

} // namespace

std::string remove_from_requirements(std::string_view content, const PackageSet &packages) {
  const auto lines = text::split_lines(content);
  std::set<int> drop;
  for (const auto &logical : requirement_logical_lines(content)) {
    if (!names_package(logical.text, packages))
      continue;
    for (int l = logical.first_line; l <= logical.last_line; ++l)
      drop.insert(l);
    // Indented comments below a requirement are pip-compile annotations ("# via ...").
    for (int l = logical.last_line + 1; l <= static_cast<int>(lines.size()); ++l) {
      const auto line = lines[l - 1];
      if (line.empty() || !text::is_space(line[0]) || !text::trim(line).starts_with("#"))
        break;
      drop.insert(l);
    }
  }
  if (drop.empty())
    return std::string(content);
  return rewrite_lines(content, drop, {});
}

std::string remove_from_toml(std::string_view content, const PackageSet &packages) {
  const auto doc = toml::parse(content);
  Splice splice;

  if (const auto *project = doc.root.find("project"); project && project->is_table()) {
    if (const auto *deps = project->find("dependencies"); deps && deps->is_array())
      remove_from_toml_array(content, *deps, packages, splice);
    if (const auto *optional = project->find("optional-dependencies"); optional && optional->is_table()) {
      for (const auto &[group, value] : optional->table) {
        if (!value.is_array())
          continue;
        std::optional<std::pair<std::size_t, std::size_t>> whole;
        if (all_named(value, packages) && value.key_begin != toml::npos)
          whole = own_line_range(content, value.key_begin, value.end);
        if (whole)
          splice.erase(whole->first, whole->second);
        else
          remove_from_toml_array(content, value, packages, splice);
      }
    }
  }

  if (const auto *poetry = doc.root.at_path({"tool", "poetry"}); poetry && poetry->is_table()) {
    remove_poetry_keys(content, doc, poetry->find("dependencies"), {"tool", "poetry", "dependencies"}, packages,
                       splice);
    remove_poetry_keys(content, doc, poetry->find("dev-dependencies"), {"tool", "poetry", "dev-dependencies"},
                       packages, splice);
    if (const auto *groups = poetry->find("group"); groups && groups->is_table()) {
      for (const auto &[group, value] : groups->table) {
        if (value.is_table())
          remove_poetry_keys(content, doc, value.find("dependencies"),
                             {"tool", "poetry", "group", group, "dependencies"}, packages, splice);
      }
    }
  }

  if (splice.empty())
    return std::string(content);
  auto result = splice.apply(content);
  try {
    toml::parse(result);
  } catch (const Error &e) {
    fail(ErrorKind::TomlSyntaxError, std::string("edit would leave invalid TOML: ") + e.what());
  }
  return result;
}

std::string remove_from_setup_cfg(std::string_view content, const PackageSet &packages) {
  const auto doc = ini::parse(content);
  const text::LineIndex index(content);
  std::set<int> drop;
  std::map<int, std::string> replace;

  auto line_text = [&](int line) {
    return std::string(text::chomp(content.substr(index.line_start(line), index.line_end(line) - index.line_start(line))));
  };

  auto process = [&](const ini::Option &option) {
    const auto values = ini::value_lines(option);
    if (values.empty())
      return;
    bool all_removed = true;
    bool any_removed = false;
    struct Pending {
      int line;
      bool inline_value;
      std::vector<std::string> kept; ///< surviving comma entries on the key line
      bool whole;
    };
    std::vector<Pending> pending;
    for (const auto &v : values) {
      const bool on_key_line = v.line == option.key_line;
      std::vector<std::string> entries;
      if (on_key_line && values.size() == 1) {
        for (auto e : text::split(strip_requirement_comment(v.text), ','))
          entries.emplace_back(text::trim(e));
      } else {
        entries.push_back(v.text);
      }
      std::vector<std::string> kept;
      bool removed_here = false;
      for (const auto &e : entries) {
        if (!e.empty() && names_package(e, packages))
          removed_here = true;
        else if (!e.empty())
          kept.push_back(e);
      }
      any_removed = any_removed || removed_here;
      if (!kept.empty())
        all_removed = false;
      if (removed_here)
        pending.push_back({v.line, on_key_line, kept, kept.empty()});
    }
    if (!any_removed)
      return;
    if (all_removed) {
      int last = option.key_line;
      for (const auto &v : values)
        last = std::max(last, v.line);
      for (int l = option.key_line; l <= last; ++l)
        drop.insert(l);
      return;
    }
    for (const auto &p : pending) {
      if (!p.inline_value) {
        drop.insert(p.line);
        continue;
      }
      const auto text_line = line_text(p.line);
      const auto delim = text_line.find_first_of("=:");
      auto prefix = text_line.substr(0, delim + 1);
      if (p.kept.empty())
        replace[p.line] = std::string(text::trim_right(prefix));
      else
        replace[p.line] = prefix + " " + text::join(p.kept, ", ");
    }
  };

  if (const auto *options = doc.find("options")) {
    if (const auto *o = options->find("install_requires"))
      process(*o);
  }
  if (const auto *extras = doc.find("options.extras_require")) {
    for (const auto &o : extras->options)
      process(o);
  }
  if (drop.empty() && replace.empty())
    return std::string(content);
  auto result = rewrite_lines(content, drop, replace);
  ini::parse(result);
  return result;
}

std::string remove_from_setup_py(std::string_view content, const PackageSet &packages) {
  const auto ex = setup_py::extract(content);
  std::map<std::size_t, std::vector<bool>> list_removals; // sequence -> per item flag
  for (const auto &req : ex.requirements) {
    if (!names_package(req.text, packages))
      continue;
    auto &flags = list_removals[req.sequence];
    flags.resize(ex.sequences[req.sequence].items.size(), false);
    flags[req.item] = true;
  }
  if (list_removals.empty())
    return std::string(content);

  std::map<std::size_t, std::vector<bool>> dict_removals;
  for (const auto &group : ex.extras_groups) {
    if (!group.list_sequence)
      continue;
    const auto list = *group.list_sequence;
    auto it = list_removals.find(list);
    if (it == list_removals.end())
      continue;
    const auto &seq = ex.sequences[list];
    const auto &dict = ex.sequences[group.dict_sequence];
    const auto &item = dict.items[group.item];
    const bool every = std::all_of(it->second.begin(), it->second.end(), [](bool b) { return b; }) &&
                       it->second.size() == seq.items.size();
    const bool inside = seq.open >= item.begin && seq.close < item.end;
    if (every && inside) {
      auto &flags = dict_removals[group.dict_sequence];
      flags.resize(dict.items.size(), false);
      flags[group.item] = true;
      list_removals.erase(it);
    }
  }

  Splice splice;
  auto excise = [&](std::size_t sequence, const std::vector<bool> &flags) {
    std::vector<ListItem> items;
    const auto &seq = ex.sequences[sequence];
    for (std::size_t k = 0; k < seq.items.size(); ++k)
      items.push_back({seq.items[k].begin, seq.items[k].end, k < flags.size() && flags[k]});
    excise_items(content, items, splice);
  };
  for (const auto &[sequence, flags] : list_removals)
    excise(sequence, flags);
  for (const auto &[sequence, flags] : dict_removals)
    excise(sequence, flags);

  auto result = splice.apply(content);
  python::validate(result);
  return result;
}

std::string remove_imports_from_source(std::string_view content, const std::set<std::string> &import_names) {
  const python::Module module(content);
  const auto &tokens = module.tokens();
  const auto &lines = module.lines();
  const auto statements = python::find_import_statements(module);

  auto top_level = [](std::string_view dotted) { return std::string(dotted.substr(0, dotted.find('.'))); };

  std::map<std::size_t, std::set<std::size_t>> removed_by_line; // line -> statement indices
  Splice splice;
  for (const auto &stmt : statements) {
    if (stmt.relative_level > 0)
      continue;
    if (stmt.from_import) {
      if (import_names.count(top_level(stmt.module)))
        removed_by_line[stmt.line_index].insert(stmt.statement_index);
      continue;
    }
    std::vector<std::string> kept;
    for (const auto &n : stmt.names) {
      if (!import_names.count(top_level(n.name))) {
        kept.emplace_back(content.substr(tokens[n.first].begin, tokens[n.last - 1].end - tokens[n.first].begin));
      }
    }
    if (kept.size() == stmt.names.size())
      continue;
    if (kept.empty()) {
      removed_by_line[stmt.line_index].insert(stmt.statement_index);
      continue;
    }
    const auto begin = tokens[stmt.first_token].begin;
    const auto end = tokens[stmt.last_token - 1].end;
    splice.replace(begin, end, "import " + text::join(kept, ", "));
  }

  const text::LineIndex index(content);
  std::set<std::size_t> deleted_lines;
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> deleted_range;
  for (const auto &[line_index, removed] : removed_by_line) {
    const auto &line = lines[line_index];
    const auto code = module.code_tokens(line);
    const auto shape = module.shape(line);
    auto stmt_begin = [&](std::size_t k) { return tokens[code[shape.statements[k].first]].begin; };
    auto stmt_end = [&](std::size_t k) { return tokens[code[shape.statements[k].last - 1]].end; };

    if (removed.size() == shape.statements.size()) {
      if (shape.header) {
        splice.replace(stmt_begin(0), stmt_end(shape.statements.size() - 1), "pass");
      } else {
        const auto begin = index.line_start(line.start_line);
        const auto end = index.line_end(line.end_line);
        deleted_lines.insert(line_index);
        deleted_range[line_index] = {begin, end};
      }
      continue;
    }
    for (auto k : removed) {
      std::optional<std::size_t> kept_after;
      for (auto m = k + 1; m < shape.statements.size(); ++m) {
        if (!removed.count(m)) {
          kept_after = m;
          break;
        }
      }
      if (kept_after) {
        splice.erase(stmt_begin(k), stmt_begin(k + 1));
      } else {
        std::size_t prev = k;
        while (prev > 0 && removed.count(prev - 1))
          --prev;
        // prev - 1 is the last surviving statement before this trailing run.
        splice.erase(stmt_end(prev - 1), stmt_end(k));
      }
    }
  }

  // Blocks whose whole body was deleted keep a `pass`.
  std::map<std::size_t, std::vector<std::size_t>> children;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].parent)
      children[*lines[i].parent].push_back(i);
  }
  std::set<std::size_t> placeholder;
  for (const auto &[parent, kids] : children) {
    if (std::all_of(kids.begin(), kids.end(), [&](std::size_t k) { return deleted_lines.count(k) > 0; }))
      placeholder.insert(kids.front());
  }
  for (const auto &[line_index, range] : deleted_range) {
    if (placeholder.count(line_index)) {
      const auto first = tokens[lines[line_index].first].begin;
      auto eol = eol_at(content, range.second);
      splice.replace(range.first, range.second, indentation_of(content, first) + "pass" + eol);
    } else {
      splice.erase(range.first, range.second);
    }
  }

  if (splice.empty())
    return std::string(content);
  auto result = splice.apply(content);
  python::validate(result);
  return result;
}

std::string remove_from_environment_yaml(std::string_view content, const PackageSet &packages) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(content));
  } catch (const YAML::Exception &e) {
    fail(ErrorKind::YamlSyntaxError, e.what());
  }
  if (!root.IsMap() || !root["dependencies"] || !root["dependencies"].IsSequence())
    return std::string(content);
  const auto deps = root["dependencies"];

  auto conda_matches = [&](const std::string &entry) {
    const auto name = conda_package_name(entry);
    return !name.empty() && key_names_package(name, packages);
  };
  bool any = false;
  for (const auto &item : deps) {
    if (item.IsScalar())
      any = any || conda_matches(item.as<std::string>());
    else if (item.IsMap() && item["pip"] && item["pip"].IsSequence()) {
      for (const auto &pip : item["pip"])
        any = any || (pip.IsScalar() && names_package(pip.as<std::string>(), packages));
    }
  }
  if (!any)
    return std::string(content);
  if (has_anchor_or_alias(content))
    fail(ErrorKind::YamlSyntaxError, "anchors or aliases present; not edited");
  if (deps.Style() == YAML::EmitterStyle::Flow)
    fail(ErrorKind::YamlSyntaxError, "flow-style dependency list; not edited");

  const text::LineIndex index(content);
  std::set<int> drop;
  auto drop_item = [&](const YAML::Node &node) {
    const int line = node.Mark().line + 1;
    if (!is_block_item_line(content, index, line))
      fail(ErrorKind::YamlSyntaxError, "dependency item shares its line; not edited");
    drop.insert(line);
  };
  for (const auto &item : deps) {
    if (item.IsScalar()) {
      if (conda_matches(item.as<std::string>()))
        drop_item(item);
    } else if (item.IsMap() && item["pip"] && item["pip"].IsSequence()) {
      const auto pip = item["pip"];
      if (pip.Style() == YAML::EmitterStyle::Flow)
        fail(ErrorKind::YamlSyntaxError, "flow-style pip list; not edited");
      std::size_t total = 0;
      std::size_t removed = 0;
      for (const auto &p : pip) {
        ++total;
        if (p.IsScalar() && names_package(p.as<std::string>(), packages)) {
          drop_item(p);
          ++removed;
        }
      }
      if (total > 0 && removed == total && item.size() == 1) {
        // The `- pip:` line itself.
        const int line = item.Mark().line + 1;
        if (is_block_item_line(content, index, line))
          drop.insert(line);
      }
    }
  }
  auto result = rewrite_lines(content, drop, {});
  try {
    YAML::Load(result);
  } catch (const YAML::Exception &e) {
    fail(ErrorKind::YamlSyntaxError, std::string("edit would leave invalid YAML: ") + e.what());
  }
  return result;
}

std::string remove_from(FileKind kind, std::string_view content, const PackageSet &packages) {
  switch (kind) {
  case FileKind::Requirements:
    return remove_from_requirements(content, packages);
  case FileKind::PyProjectToml:
    return remove_from_toml(content, packages);
  case FileKind::SetupCfg:
    return remove_from_setup_cfg(content, packages);
  case FileKind::SetupPy:
    return remove_from_setup_py(content, packages);
  case FileKind::YamlEnv:
    return remove_from_environment_yaml(content, packages);
  case FileKind::PythonSource:
  case FileKind::Unmodifiable:
    break;
  }
  return std::string(content);
}

std::vector<ManualFlag> find_mentions(std::string_view content, const std::string &path, const PackageName &package) {
  std::set<std::string> needles = {text::lower(package.raw()), package.normalized()};
  auto is_word = [](char c) { return text::is_alnum(c) || c == '_' || c == '-'; };
  std::vector<ManualFlag> out;
  const auto lines = text::split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto lowered = text::lower(text::chomp(lines[i]));
    bool hit = false;
    for (const auto &needle : needles) {
      if (needle.empty())
        continue;
      for (auto pos = lowered.find(needle); pos != std::string::npos && !hit; pos = lowered.find(needle, pos + 1)) {
        const bool left = pos == 0 || !is_word(lowered[pos - 1]);
        const auto after = pos + needle.size();
        const bool right = after >= lowered.size() || !is_word(lowered[after]);
        hit = left && right;
      }
    }
    if (hit) {
      out.push_back(ManualFlag{SourceLocation{path, static_cast<int>(i) + 1, FileKind::Unmodifiable, ""},
                               "mentions " + package.raw() + "; not edited, review manually"});
    }
  }
  return out;
}

std::vector<ManualFlag> flag_unmodifiable_mentions(const Discovery &project, const PackageName &package) {
  std::vector<ManualFlag> out;
  for (const auto &path : project.mention_files) {
    std::string content;
    try {
      content = text::read_file(project.root / path);
    } catch (const Error &) {
      continue;
    }
    auto flags = find_mentions(content, path, package);
    out.insert(out.end(), flags.begin(), flags.end());
  }
  return out;
}

std::vector<std::string> check_lockfile_sync(const Discovery &project, const EditPlan &plan) {
  std::vector<std::string> out;
  for (const auto &lock : project.lock_files) {
    const fs::path lock_path(lock);
    const auto name = lock_path.filename().string();
    const auto manifest =
        (lock_path.parent_path() / (name == "Pipfile.lock" ? "Pipfile" : "pyproject.toml")).generic_string();
    const bool touched = std::any_of(plan.file_edits.begin(), plan.file_edits.end(),
                                     [&](const FileEdit &e) { return e.file_path == manifest; });
    if (touched)
      out.push_back(lock + " may be out of sync with " + manifest + "; regenerate it manually");
  }
  return out;
}

EditPlan plan_removal(const Discovery &project, const std::vector<BloatFinding> &findings) {
  struct Work {
    std::optional<FileKind> config_kind;
    PackageSet config_packages;
    std::set<std::string> import_names;
    PackageSet import_packages;
    int first_line = 1;
  };
  std::map<std::string, Work> work;
  EditPlan plan;

  for (const auto &f : findings) {
    if (f.report_only)
      continue;
    for (const auto &loc : f.declared_at) {
      auto &w = work[loc.file_path];
      if (!w.config_kind)
        w.first_line = loc.line;
      w.config_kind = loc.file_kind;
      w.config_packages.insert(f.package);
    }
    for (const auto &site : f.import_sites) {
      if (site.kind == ImportKind::Plain || site.kind == ImportKind::FromImport) {
        auto &w = work[site.location.file_path];
        w.import_names.insert(site.top_level);
        w.import_packages.insert(f.package);
      } else {
        plan.manual_flags.push_back(
            {site.location, "dynamic import of " + site.module_path + "; not edited, review manually"});
      }
    }
  }

  for (const auto &[path, w] : work) {
    std::string original;
    try {
      original = text::read_file(project.root / path);
    } catch (const Error &e) {
      plan.manual_flags.push_back({SourceLocation{path, w.first_line, w.config_kind.value_or(FileKind::PythonSource), ""},
                                   std::string("cannot read: ") + e.what()});
      continue;
    }
    auto content = original;
    PackageSet removed;
    if (w.config_kind) {
      try {
        auto next = remove_from(*w.config_kind, content, w.config_packages);
        if (next != content)
          removed.insert(w.config_packages.begin(), w.config_packages.end());
        content = std::move(next);
      } catch (const Error &e) {
        plan.manual_flags.push_back(
            {SourceLocation{path, w.first_line, *w.config_kind, ""}, std::string("not edited: ") + e.what()});
      }
    }
    if (!w.import_names.empty()) {
      try {
        auto next = remove_imports_from_source(content, w.import_names);
        if (next != content)
          removed.insert(w.import_packages.begin(), w.import_packages.end());
        content = std::move(next);
      } catch (const Error &e) {
        plan.manual_flags.push_back(
            {SourceLocation{path, 1, FileKind::PythonSource, ""}, std::string("imports not edited: ") + e.what()});
      }
    }
    if (content == original)
      continue;
    plan.file_edits.push_back(
        FileEdit{path, w.config_kind.value_or(FileKind::PythonSource), original, std::move(content), removed});
  }

  std::vector<PackageName> removable;
  for (const auto &f : findings) {
    if (!f.report_only)
      removable.push_back(f.package);
  }
  for (const auto &file : project.config_files) {
    if (file.file_kind != FileKind::SetupPy || file.parse_status != ParseStatus::Dynamic || removable.empty())
      continue;
    std::vector<std::string> names;
    for (const auto &p : removable)
      names.push_back(p.raw());
    plan.manual_flags.push_back(
        {SourceLocation{file.path, std::max(file.dynamic_anchor_line, 1), FileKind::SetupPy, ""},
         "dynamic dependency construction; check whether " + text::join(names, ", ") + " is added here"});
  }

  for (const auto &f : findings) {
    auto flags = flag_unmodifiable_mentions(project, f.package);
    plan.manual_flags.insert(plan.manual_flags.end(), flags.begin(), flags.end());
  }
  std::stable_sort(plan.manual_flags.begin(), plan.manual_flags.end(),
                   [](const ManualFlag &a, const ManualFlag &b) { return a.location < b.location; });
  plan.manual_flags.erase(std::unique(plan.manual_flags.begin(), plan.manual_flags.end()), plan.manual_flags.end());
  plan.lockfile_warnings = check_lockfile_sync(project, plan);
  return plan;
}

std::vector<std::string> apply_edits(const fs::path &project_root, const EditPlan &plan, ApplyMode mode) {
  std::vector<std::string> diffs;
  for (const auto &edit : plan.file_edits)
    diffs.push_back(unified_diff(edit.original_content, edit.new_content, edit.file_path));
  if (mode == ApplyMode::DryRun)
    return diffs;

  for (const auto &edit : plan.file_edits) {
    if (text::read_file(project_root / edit.file_path) != edit.original_content)
      fail(ErrorKind::StaleFile, edit.file_path + " changed since the plan was made");
  }
  for (const auto &edit : plan.file_edits) {
    const auto target = project_root / edit.file_path;
    auto temp = target;
    temp += ".pytrim-tmp";
    text::write_file(temp, edit.new_content);
    std::error_code ec;
    const auto perms = fs::status(target, ec).permissions();
    if (!ec)
      fs::permissions(temp, perms, ec);
    fs::rename(temp, target, ec);
    if (ec) {
      fs::remove(temp, ec);
      fail(ErrorKind::IoError, "cannot replace " + edit.file_path);
    }
  }
  return diffs;
}

} // namespace pytrim
