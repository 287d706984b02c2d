#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Static reading of `setup()` dependency arguments. Only literal displays
// are understood; anything computed marks the result dynamic.
namespace pytrim::setup_py {

struct Element {
  std::size_t begin = 0; ///< bytes of the element expression
  std::size_t end = 0;
  std::optional<std::string> value; ///< set for string literals
  int line = 0;
};

/// A list/tuple display or a dict display (items are `key: value` pairs).
struct Sequence {
  std::size_t open = 0;  ///< offset of the opening bracket
  std::size_t close = 0; ///< offset of the closing bracket
  std::vector<Element> items;
};

struct Requirement {
  std::string text;
  std::string group; ///< extras group, empty for install_requires
  int line = 0;
  std::size_t sequence = 0;
  std::size_t item = 0;
};

struct ExtrasGroup {
  std::string name;
  std::size_t dict_sequence = 0;
  std::size_t item = 0;
  std::optional<std::size_t> list_sequence; ///< set when the value is a literal list
};

struct Extraction {
  bool has_setup_call = false;
  bool dynamic = false;
  int anchor_line = 0; ///< line of the first dependency argument
  std::string project_name; ///< literal `name=` argument, if any
  std::vector<Sequence> sequences;
  std::vector<Requirement> requirements;
  std::vector<ExtrasGroup> extras_groups;
  /// Relative paths of `.txt`/`.in` files named by string literals.
  std::vector<std::string> referenced_files;
};

/// Throws Error(PySyntaxError) when the source does not tokenize.
Extraction extract(std::string_view source);

} // namespace pytrim::setup_py
