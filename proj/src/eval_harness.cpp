#include "pytrim/eval_harness.hpp"

#include "pytrim/diff.hpp"
#include "pytrim/fsutil.hpp"
#include "pytrim/ini.hpp"
#include "pytrim/pipeline.hpp"
#include "pytrim/python_source.hpp"
#include "pytrim/text.hpp"
#include "pytrim/toml.hpp"

#include "json.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cstdio>
#include <set>

namespace pytrim::eval {

namespace fs = std::filesystem;

namespace {

enum class Kind { Requirements, Toml, Ini, Python, Yaml, Text };

Kind kind_for(const std::string &path) {
  const auto name = text::lower(fs::path(path).filename().string());
  if (name == "manifest.in")
    return Kind::Text;
  if (name.ends_with(".txt") || name.ends_with(".in"))
    return Kind::Requirements;
  if (name.ends_with(".toml"))
    return Kind::Toml;
  if (name.ends_with(".cfg") || name.ends_with(".ini"))
    return Kind::Ini;
  if (name.ends_with(".py"))
    return Kind::Python;
  if (name.ends_with(".yml") || name.ends_with(".yaml"))
    return Kind::Yaml;
  return Kind::Text;
}

std::string squeeze(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (!text::is_space(c))
      out += c;
  }
  return out;
}

std::string text_canonical(std::string_view content) {
  std::vector<std::string> lines;
  for (auto line : text::split_lines(text::strip_bom(content))) {
    const auto body = text::trim(line);
    if (!body.empty())
      lines.emplace_back(body);
  }
  return text::join(lines, "\n");
}

std::string requirements_canonical(std::string_view content) {
  std::vector<std::string> entries;
  for (const auto &logical : requirement_logical_lines(content)) {
    const auto body = text::trim(strip_requirement_comment(logical.text));
    if (body.empty())
      continue;
    std::optional<RequirementSpec> spec;
    try {
      spec = parse_requirement_line(body);
    } catch (const Error &) {
    }
    if (!spec) {
      entries.push_back(squeeze(body));
      continue;
    }
    std::string e = spec->name.normalized();
    if (!spec->extras.empty()) {
      std::vector<std::string> extras;
      for (const auto &x : spec->extras)
        extras.push_back(text::lower(x));
      e += "[" + text::join(extras, ",") + "]";
    }
    e += squeeze(spec->version_constraint);
    if (spec->marker)
      e += ";" + squeeze(*spec->marker);
    entries.push_back(std::move(e));
  }
  return text::join(entries, "\n");
}

std::string ini_canonical(std::string_view content) {
  const auto doc = ini::parse(text::strip_bom(content));
  std::string out;
  for (const auto &section : doc.sections) {
    out += "[" + section.name + "]\n";
    for (const auto &option : section.options) {
      out += option.key + "=";
      std::vector<std::string> values;
      for (const auto &v : ini::value_lines(option)) {
        const auto body = text::trim(strip_requirement_comment(v.text));
        if (!body.empty())
          values.emplace_back(body);
      }
      out += text::join(values, "\x1f") + "\n";
    }
  }
  return out;
}

void yaml_canonical(const YAML::Node &node, std::string &out) {
  switch (node.Type()) {
  case YAML::NodeType::Scalar:
    out += "s:" + node.Scalar() + "\x1f";
    break;
  case YAML::NodeType::Sequence:
    out += "[";
    for (const auto &item : node)
      yaml_canonical(item, out);
    out += "]";
    break;
  case YAML::NodeType::Map:
    out += "{";
    for (const auto &kv : node) {
      yaml_canonical(kv.first, out);
      out += ":";
      yaml_canonical(kv.second, out);
    }
    out += "}";
    break;
  default:
    out += "~";
  }
}

std::optional<std::string> canonical(Kind kind, std::string_view content) {
  try {
    switch (kind) {
    case Kind::Requirements:
      return requirements_canonical(content);
    case Kind::Ini:
      return ini_canonical(content);
    case Kind::Python:
      return text::join(python::semantic_tokens(text::strip_bom(content)), "\x1f");
    case Kind::Yaml: {
      std::string out;
      yaml_canonical(YAML::Load(std::string(content)), out);
      return out;
    }
    case Kind::Text:
    case Kind::Toml:
      return text_canonical(content);
    }
  } catch (const Error &) {
  } catch (const YAML::Exception &) {
  }
  return std::nullopt;
}

std::set<std::string> files_under(const fs::path &root) {
  std::set<std::string> out;
  std::error_code ec;
  for (auto it = fs::recursive_directory_iterator(root, ec); it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec)
      break;
    if (it->is_regular_file(ec))
      out.insert(fs::relative(it->path(), root).generic_string());
  }
  return out;
}

std::optional<std::string> read_if_present(const fs::path &p) {
  std::error_code ec;
  if (!fs::is_regular_file(p, ec))
    return std::nullopt;
  return text::read_file(p);
}

bool excluded(const ReplicationCase &c, const std::string &path) {
  return std::any_of(c.excluded_files.begin(), c.excluded_files.end(),
                     [&](const std::string &pattern) { return pattern == path || text::glob_match(pattern, path); });
}

std::vector<std::string> string_list(const nlohmann::json &j, const char *key, const fs::path &file) {
  std::vector<std::string> out;
  if (!j.contains(key))
    return out;
  if (!j[key].is_array())
    fail(ErrorKind::CaseSetupError, file.string() + ": '" + key + "' must be a list");
  for (const auto &v : j[key]) {
    if (!v.is_string())
      fail(ErrorKind::CaseSetupError, file.string() + ": '" + key + "' must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

} // namespace

bool semantically_equal(const std::string &path, std::string_view a, std::string_view b) {
  const auto kind = kind_for(path);
  if (kind == Kind::Toml) {
    try {
      return toml::equivalent(toml::parse(a).root, toml::parse(b).root);
    } catch (const Error &) {
      return text_canonical(a) == text_canonical(b);
    }
  }
  const auto ca = canonical(kind, a);
  const auto cb = canonical(kind, b);
  if (ca && cb)
    return *ca == *cb;
  return text_canonical(a) == text_canonical(b);
}

std::optional<double> ReplicationResult::accuracy() const {
  if (relevant_files == 0)
    return std::nullopt;
  return static_cast<double>(matched) / relevant_files;
}

std::optional<double> Summary::accuracy() const {
  if (relevant_files == 0)
    return std::nullopt;
  return static_cast<double>(matched) / relevant_files;
}

ReplicationCase load_case(const fs::path &case_dir) {
  ReplicationCase c;
  c.case_id = case_dir.filename().string();
  c.pre_tree = case_dir / "pre";
  c.post_tree = case_dir / "post";
  const auto manifest = case_dir / "case.json";
  std::error_code ec;
  if (!fs::is_directory(c.pre_tree, ec) || !fs::is_directory(c.post_tree, ec))
    fail(ErrorKind::CaseSetupError, c.case_id + ": pre/ and post/ directories are required");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text::read_file(manifest));
  } catch (const nlohmann::json::exception &e) {
    fail(ErrorKind::CaseSetupError, manifest.string() + ": " + e.what());
  } catch (const Error &e) {
    fail(ErrorKind::CaseSetupError, e.what());
  }
  c.removed_packages = string_list(j, "removed", manifest);
  c.excluded_files = string_list(j, "excluded", manifest);
  if (c.removed_packages.empty())
    fail(ErrorKind::CaseSetupError, manifest.string() + ": 'removed' must not be empty");
  return c;
}

std::vector<ReplicationCase> load_cases(const fs::path &cases_dir) {
  std::error_code ec;
  if (!fs::is_directory(cases_dir, ec))
    fail(ErrorKind::CaseSetupError, cases_dir.string() + " is not a directory");
  std::vector<fs::path> dirs;
  for (const auto &entry : fs::directory_iterator(cases_dir)) {
    if (entry.is_directory() && fs::exists(entry.path() / "case.json"))
      dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  std::vector<ReplicationCase> out;
  for (const auto &d : dirs)
    out.push_back(load_case(d));
  return out;
}

ReplicationResult replicate(const ReplicationCase &c) {
  const auto started = std::chrono::steady_clock::now();
  ReplicationResult result;
  result.case_id = c.case_id;

  TempDir scratch("pytrim-eval");
  const auto work = scratch.path() / "tree";
  try {
    copy_tree(c.pre_tree, work);
  } catch (const Error &e) {
    fail(ErrorKind::CaseSetupError, c.case_id + ": " + e.what());
  }

  PipelineOptions options;
  options.project_root = work;
  options.remove = c.removed_packages;
  options.dynamic = false;
  try {
    const auto run = run_pipeline(options);
    apply_edits(work, run.plan, ApplyMode::Write);
  } catch (const Error &) {
    // Compared as-is below; every expected change then shows up as a mismatch.
  }

  auto paths = files_under(c.pre_tree);
  const auto post_files = files_under(c.post_tree);
  paths.insert(post_files.begin(), post_files.end());
  for (const auto &path : paths) {
    const auto before = read_if_present(c.pre_tree / path);
    const auto expected = read_if_present(c.post_tree / path);
    if (before == expected)
      continue;
    ++result.changed_files;
    if (excluded(c, path)) {
      ++result.excluded_files;
      continue;
    }
    ++result.relevant_files;
    const auto actual = read_if_present(work / path);
    bool same;
    if (!actual || !expected)
      same = !actual && !expected;
    else
      same = semantically_equal(path, *actual, *expected);
    if (same)
      ++result.matched;
    else
      result.mismatched.emplace_back(path, unified_diff(actual.value_or(""), expected.value_or(""), path));
  }
  result.duration = std::chrono::steady_clock::now() - started;
  return result;
}

Summary summarize(const std::vector<ReplicationResult> &results) {
  Summary s;
  for (const auto &r : results) {
    ++s.cases;
    s.changed_files += r.changed_files;
    s.excluded_files += r.excluded_files;
    s.relevant_files += r.relevant_files;
    s.matched += r.matched;
    s.mismatched += static_cast<int>(r.mismatched.size());
    s.duration += r.duration;
  }
  return s;
}

std::string format_accuracy(std::optional<double> accuracy) {
  if (!accuracy)
    return "N/A";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", *accuracy * 100.0);
  return buf;
}

std::string render_summary_markdown(const Summary &s, const std::vector<ReplicationResult> &results) {
  std::string out;
  out += "| Metric | Value |\n";
  out += "|---|---:|\n";
  out += "| Total Pull Requests Analyzed | " + std::to_string(s.cases) + " |\n";
  out += "| Total Files with Dependency Changes | " + std::to_string(s.changed_files) + " |\n";
  out += "| Files Excluded (e.g., Documentation) | " + std::to_string(s.excluded_files) + " |\n";
  out += "| **Relevant Files for Comparison** | **" + std::to_string(s.relevant_files) + "** |\n";
  out += "| Files Correctly Replicated | " + std::to_string(s.matched) + " |\n";
  out += "| Files with Mismatched Output | " + std::to_string(s.mismatched) + " |\n";
  out += "| **Replication Accuracy** | **" + format_accuracy(s.accuracy()) + "** |\n";

  bool any = false;
  for (const auto &r : results) {
    for (const auto &[path, diff] : r.mismatched) {
      if (!any)
        out += "\n## Mismatches\n";
      any = true;
      out += "\n### " + r.case_id + ": " + path + "\n\n```diff\n" + diff + "```\n";
    }
  }
  return out;
}

std::string render_summary_json(const Summary &s, const std::vector<ReplicationResult> &results) {
  nlohmann::ordered_json j;
  j["cases"] = s.cases;
  j["changed_files"] = s.changed_files;
  j["excluded_files"] = s.excluded_files;
  j["relevant_files"] = s.relevant_files;
  j["matched"] = s.matched;
  j["mismatched"] = s.mismatched;
  const auto acc = s.accuracy();
  j["accuracy"] = acc ? nlohmann::ordered_json(*acc) : nlohmann::ordered_json(nullptr);
  j["seconds"] = s.duration.count();
  auto list = nlohmann::ordered_json::array();
  for (const auto &r : results) {
    nlohmann::ordered_json c;
    c["id"] = r.case_id;
    c["changed_files"] = r.changed_files;
    c["excluded_files"] = r.excluded_files;
    c["relevant_files"] = r.relevant_files;
    c["matched"] = r.matched;
    auto mism = nlohmann::ordered_json::array();
    for (const auto &[path, diff] : r.mismatched)
      mism.push_back({{"file", path}, {"diff", diff}});
    c["mismatched"] = mism;
    list.push_back(c);
  }
  j["results"] = list;
  return j.dump(2) + "\n";
}

} // namespace pytrim::eval
