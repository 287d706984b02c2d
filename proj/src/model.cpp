#include "pytrim/model.hpp"

#include "pytrim/text.hpp"

#include <algorithm>

namespace pytrim {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::EmptyName: return "EmptyName";
  case ErrorKind::InvalidName: return "InvalidName";
  case ErrorKind::MalformedRequirement: return "MalformedRequirement";
  case ErrorKind::NotADirectory: return "NotADirectory";
  case ErrorKind::TomlSyntaxError: return "TomlSyntaxError";
  case ErrorKind::IniSyntaxError: return "IniSyntaxError";
  case ErrorKind::YamlSyntaxError: return "YamlSyntaxError";
  case ErrorKind::PySyntaxError: return "PySyntaxError";
  case ErrorKind::InstallerNotFound: return "InstallerNotFound";
  case ErrorKind::MalformedMetadata: return "MalformedMetadata";
  case ErrorKind::MultipleRoots: return "MultipleRoots";
  case ErrorKind::MissingRoot: return "MissingRoot";
  case ErrorKind::StaleFile: return "StaleFile";
  case ErrorKind::IoError: return "IoError";
  case ErrorKind::NotARepo: return "NotARepo";
  case ErrorKind::DirtyWorktree: return "DirtyWorktree";
  case ErrorKind::VcsCommandFailed: return "VcsCommandFailed";
  case ErrorKind::CaseSetupError: return "CaseSetupError";
  case ErrorKind::Usage: return "Usage";
  }
  return "Unknown";
}

std::string_view to_string(FileKind kind) {
  switch (kind) {
  case FileKind::Requirements: return "requirements";
  case FileKind::PyProjectToml: return "pyproject";
  case FileKind::SetupPy: return "setup.py";
  case FileKind::SetupCfg: return "setup.cfg";
  case FileKind::YamlEnv: return "yaml-env";
  case FileKind::PythonSource: return "python";
  case FileKind::Unmodifiable: return "unmodifiable";
  }
  return "unknown";
}

std::string_view to_string(ImportKind kind) {
  switch (kind) {
  case ImportKind::Plain: return "import";
  case ImportKind::FromImport: return "from-import";
  case ImportKind::DynamicLiteral: return "importlib";
  case ImportKind::DunderImport: return "__import__";
  }
  return "unknown";
}

namespace {

bool is_name_char(char c) {
  return text::is_alnum(c) || c == '-' || c == '_' || c == '.';
}

bool is_separator(char c) { return c == '-' || c == '_' || c == '.'; }

} // namespace

std::string PackageName::module_guess() const {
  std::string out = normalized_;
  std::replace(out.begin(), out.end(), '-', '_');
  return out;
}

PackageName normalize_name(std::string_view raw) {
  const auto trimmed = text::trim(raw);
  if (trimmed.empty())
    fail(ErrorKind::EmptyName, "package name is empty");
  if (!std::all_of(trimmed.begin(), trimmed.end(), is_name_char) ||
      !text::is_alnum(trimmed.front()) || !text::is_alnum(trimmed.back()))
    fail(ErrorKind::InvalidName, "invalid package name '" + std::string(trimmed) + "'");

  PackageName name;
  name.raw_ = std::string(trimmed);
  name.normalized_.reserve(trimmed.size());
  for (std::size_t i = 0; i < trimmed.size(); ++i) {
    const char c = trimmed[i];
    if (is_separator(c)) {
      if (name.normalized_.empty() || name.normalized_.back() != '-')
        name.normalized_ += '-';
    } else {
      name.normalized_ += text::to_lower(c);
    }
  }
  return name;
}

bool RequirementSpec::same_requirement(const RequirementSpec &other) const {
  return name == other.name && extras == other.extras &&
         version_constraint == other.version_constraint && marker == other.marker;
}

std::string serialize(const RequirementSpec &spec) {
  std::string out = spec.name.raw();
  if (!spec.extras.empty()) {
    out += '[';
    bool first = true;
    for (const auto &extra : spec.extras) {
      if (!first)
        out += ',';
      out += extra;
      first = false;
    }
    out += ']';
  }
  if (!spec.version_constraint.empty()) {
    if (spec.version_constraint.front() == '@')
      out += ' ';
    out += spec.version_constraint;
  }
  if (spec.marker) {
    // Direct references need whitespace before the marker separator.
    out += spec.version_constraint.starts_with('@') ? " ; " : "; ";
    out += *spec.marker;
  }
  return out;
}

std::string_view strip_requirement_comment(std::string_view line) {
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] != '#')
      continue;
    if (i == 0 || text::is_space(line[i - 1]))
      return line.substr(0, i);
  }
  return line;
}

std::optional<RequirementSpec> parse_requirement_line(std::string_view line) {
  std::string_view body = text::trim(strip_requirement_comment(text::strip_bom(line)));
  if (body.empty() || body.front() == '-')
    return std::nullopt;

  auto malformed = [&](const std::string &why) -> void {
    fail(ErrorKind::MalformedRequirement,
         "malformed requirement '" + std::string(body) + "': " + why);
  };

  std::size_t pos = 0;
  while (pos < body.size() && is_name_char(body[pos]))
    ++pos;
  const auto name_part = body.substr(0, pos);
  if (name_part.empty())
    malformed("missing name");

  RequirementSpec spec;
  try {
    spec.name = normalize_name(name_part);
  } catch (const Error &err) {
    malformed(err.what());
  }

  auto rest = text::trim_left(body.substr(pos));
  if (rest.starts_with('[')) {
    const auto close = rest.find(']');
    if (close == std::string_view::npos)
      malformed("unterminated extras");
    for (auto extra : text::split(rest.substr(1, close - 1), ',')) {
      extra = text::trim(extra);
      if (extra.empty())
        continue;
      if (!std::all_of(extra.begin(), extra.end(), is_name_char))
        malformed("invalid extra '" + std::string(extra) + "'");
      spec.extras.emplace(extra);
    }
    rest = text::trim_left(rest.substr(close + 1));
  }

  std::string_view constraint;
  if (rest.starts_with('@')) {
    const auto semi = rest.find(';');
    constraint = text::trim(rest.substr(1, semi == std::string_view::npos ? rest.npos : semi - 1));
    if (constraint.empty())
      malformed("empty direct reference");
    spec.version_constraint = "@ " + std::string(constraint);
    rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi);
  } else if (!rest.empty() && std::string_view("=<>!~(").find(rest.front()) != std::string_view::npos) {
    const auto semi = rest.find(';');
    constraint = text::trim(rest.substr(0, semi));
    if (constraint.starts_with('(')) {
      if (!constraint.ends_with(')'))
        malformed("unbalanced parenthesis");
      constraint = text::trim(constraint.substr(1, constraint.size() - 2));
    }
    spec.version_constraint = std::string(constraint);
    rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi);
  }

  if (rest.starts_with(';')) {
    const auto marker = text::trim(rest.substr(1));
    if (!marker.empty())
      spec.marker = std::string(marker);
  } else if (!rest.empty()) {
    malformed("unexpected '" + std::string(rest) + "'");
  }
  return spec;
}

std::set<std::string> DependencyGraph::successors(const std::string &normalized) const {
  std::set<std::string> out;
  for (auto it = edges.lower_bound({normalized, std::string{}});
       it != edges.end() && it->first == normalized; ++it)
    out.insert(it->second);
  return out;
}

std::size_t DependencyGraph::in_degree(const std::string &normalized) const {
  return static_cast<std::size_t>(std::count_if(
      edges.begin(), edges.end(), [&](const auto &edge) { return edge.second == normalized; }));
}

std::set<PackageName> DependencyGraph::direct_dependencies() const {
  std::set<PackageName> out;
  for (const auto &to : successors(root.normalized())) {
    if (auto it = nodes.find(to); it != nodes.end())
      out.insert(it->second.name);
  }
  return out;
}

std::set<std::string> DependencyGraph::reachable_from(const std::string &from) const {
  std::set<std::string> visited;
  std::vector<std::string> stack(1, from);
  while (!stack.empty()) {
    const auto current = std::move(stack.back());
    stack.pop_back();
    for (const auto &next : successors(current)) {
      if (visited.insert(next).second)
        stack.push_back(next);
    }
  }
  return visited;
}

} // namespace pytrim
