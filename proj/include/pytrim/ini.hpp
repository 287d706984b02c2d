#pragma once

#include <string>
#include <string_view>
#include <vector>

// configparser-compatible INI reader (default dialect: `=`/`:` delimiters,
// full-line `#`/`;` comments, indented continuation lines, strict mode).
namespace pytrim::ini {

struct ValueLine {
  std::string text; ///< stripped
  int line = 0;     ///< 1-based
};

struct Option {
  std::string key;          ///< lowercased
  int key_line = 0;
  std::vector<ValueLine> values; ///< first entry is the inline value when non-empty
  int last_line = 0;        ///< last physical line owned by the option
};

struct Section {
  std::string name;
  int header_line = 0;
  std::vector<Option> options;

  const Option *find(std::string_view key) const;
};

struct Document {
  std::vector<Section> sections;

  const Section *find(std::string_view name) const;
};

/// Throws Error(IniSyntaxError).
Document parse(std::string_view content);

/// Non-empty, non-comment value lines of an option.
std::vector<ValueLine> value_lines(const Option &option);

} // namespace pytrim::ini
