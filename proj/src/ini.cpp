#include "pytrim/ini.hpp"

#include "pytrim/error.hpp"
#include "pytrim/text.hpp"

#include <limits>

namespace pytrim::ini {

const Option *Section::find(std::string_view key) const {
  const auto wanted = text::lower(key);
  for (const auto &option : options) {
    if (option.key == wanted)
      return &option;
  }
  return nullptr;
}

const Section *Document::find(std::string_view name) const {
  for (const auto &section : sections) {
    if (section.name == name)
      return &section;
  }
  return nullptr;
}

std::vector<ValueLine> value_lines(const Option &option) {
  std::vector<ValueLine> out;
  for (const auto &v : option.values) {
    if (!v.text.empty())
      out.push_back(v);
  }
  return out;
}

Document parse(std::string_view content) {
  Document doc;
  const auto lines = text::split_lines(text::strip_bom(content));

  Section *section = nullptr;
  Option *option = nullptr;
  std::size_t option_indent = std::numeric_limits<std::size_t>::max();

  auto error = [](int line, const std::string &what) {
    fail(ErrorKind::IniSyntaxError, "INI line " + std::to_string(line) + ": " + what);
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const int lineno = static_cast<int>(i) + 1;
    const auto raw = text::chomp(lines[i]);
    const auto stripped = text::trim(raw);

    if (stripped.starts_with('#') || stripped.starts_with(';'))
      continue;
    if (stripped.empty()) {
      // Blank lines may belong to a multi-line value; trailing ones are
      // dropped below.
      if (option)
        option->values.push_back({"", lineno});
      continue;
    }

    std::size_t indent = 0;
    while (indent < raw.size() && text::is_space(raw[indent]))
      ++indent;

    if (option && indent > option_indent) {
      option->values.push_back({std::string(stripped), lineno});
      option->last_line = lineno;
      continue;
    }

    if (stripped.front() == '[' && stripped.back() == ']' && stripped.size() > 2) {
      std::string name(stripped.substr(1, stripped.size() - 2));
      if (doc.find(name))
        error(lineno, "duplicate section '" + name + "'");
      doc.sections.push_back(Section{std::move(name), lineno, {}});
      section = &doc.sections.back();
      option = nullptr;
      option_indent = std::numeric_limits<std::size_t>::max();
      continue;
    }

    if (!section)
      error(lineno, "option outside of any section");

    const auto delim = stripped.find_first_of("=:");
    if (delim == std::string_view::npos)
      error(lineno, "expected 'key = value'");
    const auto key = text::lower(text::trim(stripped.substr(0, delim)));
    if (key.empty())
      error(lineno, "empty option name");
    if (section->find(key))
      error(lineno, "duplicate option '" + key + "'");

    Option opt;
    opt.key = key;
    opt.key_line = lineno;
    opt.last_line = lineno;
    const auto value = text::trim(stripped.substr(delim + 1));
    opt.values.push_back({std::string(value), lineno});
    section->options.push_back(std::move(opt));
    option = &section->options.back();
    option_indent = indent;
  }

  for (auto &sec : doc.sections) {
    for (auto &opt : sec.options) {
      while (opt.values.size() > 1 && opt.values.back().text.empty())
        opt.values.pop_back();
    }
  }
  return doc;
}

} // namespace pytrim::ini
