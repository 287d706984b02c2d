#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Minimal TOML 1.0 reader that keeps byte offsets for every value and
// key/value pair so callers can make surgical, style-preserving edits.
namespace pytrim::toml {

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

enum class Type { String, Integer, Float, Boolean, Datetime, Array, Table };

struct Value {
  Type type = Type::Table;
  std::string string; ///< String payload, or the raw text of a datetime
  std::int64_t integer = 0;
  double floating = 0.0;
  bool boolean = false;
  std::vector<Value> array;
  std::vector<std::pair<std::string, Value>> table;

  bool inline_table = false;
  bool array_of_tables = false;
  bool header_defined = false;
  bool dotted_defined = false;

  std::size_t begin = npos; ///< value text, [begin, end)
  std::size_t end = npos;
  std::size_t key_begin = npos; ///< first byte of the owning `key = value`

  const Value *find(std::string_view key) const;
  Value *find(std::string_view key);
  /// Walks a dotted path; array-of-tables steps into the last element.
  const Value *at_path(const std::vector<std::string> &path) const;

  bool is_table() const { return type == Type::Table; }
  bool is_array() const { return type == Type::Array; }
  bool is_string() const { return type == Type::String; }
};

/// Structural equality: spans, formatting and key order are ignored.
bool equivalent(const Value &a, const Value &b);

struct Header {
  std::vector<std::string> path;
  bool array_of_tables = false;
  std::size_t begin = 0;       ///< start of the `[` line
  std::size_t body_begin = 0;  ///< first byte after the header line
  std::size_t section_end = 0; ///< start of the next header, or end of input
};

struct Document {
  Value root;
  std::vector<Header> headers;
};

/// Throws Error(TomlSyntaxError) with a line number on malformed input.
Document parse(std::string_view content);

} // namespace pytrim::toml
