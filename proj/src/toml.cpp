#include "pytrim/toml.hpp"

#include "pytrim/error.hpp"
#include "pytrim/text.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pytrim::toml {

const Value *Value::find(std::string_view key) const {
  for (const auto &[k, v] : table) {
    if (k == key)
      return &v;
  }
  return nullptr;
}

Value *Value::find(std::string_view key) {
  for (auto &[k, v] : table) {
    if (k == key)
      return &v;
  }
  return nullptr;
}

const Value *Value::at_path(const std::vector<std::string> &path) const {
  const Value *current = this;
  for (const auto &key : path) {
    if (current->array_of_tables && !current->array.empty())
      current = &current->array.back();
    if (!current->is_table())
      return nullptr;
    current = current->find(key);
    if (!current)
      return nullptr;
  }
  return current;
}

bool equivalent(const Value &a, const Value &b) {
  if (a.type != b.type)
    return false;
  switch (a.type) {
  case Type::String:
  case Type::Datetime:
    return a.string == b.string;
  case Type::Integer:
    return a.integer == b.integer;
  case Type::Float:
    return (std::isnan(a.floating) && std::isnan(b.floating)) || a.floating == b.floating;
  case Type::Boolean:
    return a.boolean == b.boolean;
  case Type::Array:
    return a.array.size() == b.array.size() &&
           std::equal(a.array.begin(), a.array.end(), b.array.begin(),
                      [](const Value &x, const Value &y) { return equivalent(x, y); });
  case Type::Table:
    if (a.table.size() != b.table.size())
      return false;
    for (const auto &[key, value] : a.table) {
      const Value *other = b.find(key);
      if (!other || !equivalent(value, *other))
        return false;
    }
    return true;
  }
  return false;
}

namespace {

bool is_bare_key_char(char c) { return text::is_alnum(c) || c == '_' || c == '-'; }

void append_utf8(std::string &out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Parser {
public:
  explicit Parser(std::string_view src) : src_(src) {}

  Document run() {
    Document doc;
    doc.root.type = Type::Table;
    if (src_.starts_with(text::kBom))
      pos_ = text::kBom.size();

    std::vector<std::string> current; // table path of the active section
    while (true) {
      skip_blank_lines();
      if (at_end())
        break;
      if (peek() == '[') {
        const std::size_t start = pos_;
        const bool aot = peek(1) == '[';
        pos_ += aot ? 2 : 1;
        skip_ws();
        auto path = parse_key();
        skip_ws();
        expect(']');
        if (aot)
          expect(']');
        end_of_line();
        open_header(doc.root, path, aot);
        if (!doc.headers.empty())
          doc.headers.back().section_end = start;
        doc.headers.push_back(Header{path, aot, start, pos_, src_.size()});
        current = std::move(path);
      } else {
        const std::size_t key_start = pos_;
        auto keys = parse_key();
        skip_ws();
        expect('=');
        skip_ws();
        Value value = parse_value();
        value.key_begin = key_start;
        end_of_line();
        Value &table = resolve_section(doc.root, current);
        insert_dotted(table, keys, std::move(value), key_start);
      }
    }
    return doc;
  }

private:
  std::string_view src_;
  std::size_t pos_ = 0;

  bool at_end() const { return pos_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  [[noreturn]] void error(const std::string &what) const {
    const auto line = text::LineIndex(src_).line_of(std::min(pos_, src_.size()));
    fail(ErrorKind::TomlSyntaxError, "TOML line " + std::to_string(line) + ": " + what);
  }

  void expect(char c) {
    if (peek() != c)
      error(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_ws() {
    while (peek() == ' ' || peek() == '\t')
      ++pos_;
  }

  bool at_newline() const { return peek() == '\n' || (peek() == '\r' && peek(1) == '\n'); }

  void skip_newline() {
    if (peek() == '\r')
      ++pos_;
    ++pos_;
  }

  void skip_comment() {
    if (peek() != '#')
      return;
    while (!at_end() && !at_newline()) {
      const auto c = static_cast<unsigned char>(peek());
      if ((c < 0x20 && c != '\t') || c == 0x7F)
        error("control character in comment");
      ++pos_;
    }
  }

  void skip_blank_lines() {
    while (!at_end()) {
      skip_ws();
      skip_comment();
      if (at_newline())
        skip_newline();
      else
        break;
    }
  }

  void end_of_line() {
    skip_ws();
    skip_comment();
    if (at_end())
      return;
    if (!at_newline())
      error("expected end of line");
    skip_newline();
  }

  // Whitespace, newlines and comments inside arrays.
  void skip_array_filler() {
    while (!at_end()) {
      skip_ws();
      skip_comment();
      if (at_newline())
        skip_newline();
      else
        break;
    }
  }

  std::vector<std::string> parse_key() {
    std::vector<std::string> parts;
    while (true) {
      skip_ws();
      if (peek() == '"') {
        if (peek(1) == '"' && peek(2) == '"')
          error("multi-line string cannot be a key");
        parts.push_back(parse_basic_string());
      } else if (peek() == '\'') {
        if (peek(1) == '\'' && peek(2) == '\'')
          error("multi-line string cannot be a key");
        parts.push_back(parse_literal_string());
      } else {
        const std::size_t start = pos_;
        while (is_bare_key_char(peek()))
          ++pos_;
        if (pos_ == start)
          error("expected a key");
        parts.emplace_back(src_.substr(start, pos_ - start));
      }
      skip_ws();
      if (peek() != '.')
        return parts;
      ++pos_;
    }
  }

  void check_char(char c) const {
    const auto u = static_cast<unsigned char>(c);
    if ((u < 0x20 && c != '\t') || u == 0x7F)
      error("control character in string");
  }

  std::string parse_escape() {
    ++pos_; // backslash
    const char c = peek();
    ++pos_;
    switch (c) {
    case 'b': return "\b";
    case 't': return "\t";
    case 'n': return "\n";
    case 'f': return "\f";
    case 'r': return "\r";
    case '"': return "\"";
    case '\\': return "\\";
    case 'u':
    case 'U': {
      const std::size_t digits = c == 'u' ? 4 : 8;
      if (pos_ + digits > src_.size())
        error("truncated unicode escape");
      std::uint32_t cp = 0;
      for (std::size_t i = 0; i < digits; ++i) {
        const char h = src_[pos_ + i];
        cp <<= 4;
        if (text::is_digit(h))
          cp |= static_cast<std::uint32_t>(h - '0');
        else if (h >= 'a' && h <= 'f')
          cp |= static_cast<std::uint32_t>(h - 'a' + 10);
        else if (h >= 'A' && h <= 'F')
          cp |= static_cast<std::uint32_t>(h - 'A' + 10);
        else
          error("bad unicode escape");
      }
      pos_ += digits;
      if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
        error("invalid unicode scalar");
      std::string out;
      append_utf8(out, cp);
      return out;
    }
    default:
      error("invalid escape sequence");
    }
  }

  std::string parse_basic_string() {
    expect('"');
    std::string out;
    while (true) {
      if (at_end() || at_newline())
        error("unterminated string");
      const char c = peek();
      if (c == '"') {
        ++pos_;
        return out;
      }
      if (c == '\\') {
        out += parse_escape();
        continue;
      }
      check_char(c);
      out += c;
      ++pos_;
    }
  }

  std::string parse_literal_string() {
    expect('\'');
    std::string out;
    while (true) {
      if (at_end() || at_newline())
        error("unterminated string");
      const char c = peek();
      ++pos_;
      if (c == '\'')
        return out;
      check_char(c);
      out += c;
    }
  }

  std::string parse_multiline(char quote) {
    pos_ += 3;
    if (at_newline())
      skip_newline();
    std::string out;
    while (true) {
      if (at_end())
        error("unterminated multi-line string");
      const char c = peek();
      if (c == quote && peek(1) == quote && peek(2) == quote) {
        std::size_t run = 3;
        while (peek(run) == quote)
          ++run;
        if (run > 5)
          error("too many quotes");
        out.append(run - 3, quote);
        pos_ += run;
        return out;
      }
      if (quote == '"' && c == '\\') {
        // Line-ending backslash trims the following whitespace.
        std::size_t look = pos_ + 1;
        while (look < src_.size() && (src_[look] == ' ' || src_[look] == '\t'))
          ++look;
        if (look < src_.size() && (src_[look] == '\n' || (src_[look] == '\r' && look + 1 < src_.size() && src_[look + 1] == '\n'))) {
          pos_ = look;
          while (!at_end() && (text::is_space(peek())))
            ++pos_;
          continue;
        }
        out += parse_escape();
        continue;
      }
      if (at_newline()) {
        if (peek() == '\r')
          ++pos_;
        out += '\n';
        ++pos_;
        continue;
      }
      check_char(c);
      out += c;
      ++pos_;
    }
  }

  Value parse_value() {
    Value v;
    v.begin = pos_;
    const char c = peek();
    if (c == '"') {
      v.type = Type::String;
      v.string = (peek(1) == '"' && peek(2) == '"') ? parse_multiline('"') : parse_basic_string();
    } else if (c == '\'') {
      v.type = Type::String;
      v.string = (peek(1) == '\'' && peek(2) == '\'') ? parse_multiline('\'') : parse_literal_string();
    } else if (c == '[') {
      v.type = Type::Array;
      ++pos_;
      while (true) {
        skip_array_filler();
        if (peek() == ']') {
          ++pos_;
          break;
        }
        v.array.push_back(parse_value());
        skip_array_filler();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        expect(']');
        break;
      }
    } else if (c == '{') {
      v.type = Type::Table;
      v.inline_table = true;
      ++pos_;
      skip_ws();
      if (peek() == '}') {
        ++pos_;
      } else {
        while (true) {
          skip_ws();
          const std::size_t key_start = pos_;
          auto keys = parse_key();
          skip_ws();
          expect('=');
          skip_ws();
          Value item = parse_value();
          item.key_begin = key_start;
          insert_dotted(v, keys, std::move(item), key_start, true);
          skip_ws();
          if (peek() == ',') {
            ++pos_;
            continue;
          }
          expect('}');
          break;
        }
      }
    } else if (src_.substr(pos_).starts_with("true")) {
      v.type = Type::Boolean;
      v.boolean = true;
      pos_ += 4;
    } else if (src_.substr(pos_).starts_with("false")) {
      v.type = Type::Boolean;
      pos_ += 5;
    } else {
      parse_number_or_date(v);
    }
    v.end = pos_;
    return v;
  }

  void parse_number_or_date(Value &v) {
    const std::size_t start = pos_;
    auto is_date = [&] {
      auto s = src_.substr(pos_);
      auto digits = [&](std::size_t from, std::size_t n) {
        if (from + n > s.size())
          return false;
        for (std::size_t i = 0; i < n; ++i) {
          if (!text::is_digit(s[from + i]))
            return false;
        }
        return true;
      };
      return (digits(0, 4) && s.size() > 4 && s[4] == '-') ||
             (digits(0, 2) && s.size() > 2 && s[2] == ':');
    };
    if (is_date()) {
      while (!at_end()) {
        const char c = peek();
        if (text::is_digit(c) || c == '-' || c == ':' || c == '.' || c == '+' ||
            c == 'T' || c == 't' || c == 'Z' || c == 'z') {
          ++pos_;
        } else if (c == ' ' && text::is_digit(peek(1)) && pos_ - start == 10) {
          ++pos_;
        } else {
          break;
        }
      }
      v.type = Type::Datetime;
      v.string = std::string(src_.substr(start, pos_ - start));
      return;
    }

    while (!at_end()) {
      const char c = peek();
      if (text::is_alnum(c) || c == '_' || c == '.' || c == '+' || c == '-')
        ++pos_;
      else
        break;
    }
    std::string raw(src_.substr(start, pos_ - start));
    if (raw.empty())
      error("expected a value");

    std::string body = raw;
    bool negative = false;
    if (body.front() == '+' || body.front() == '-') {
      negative = body.front() == '-';
      body.erase(0, 1);
    }
    if (body == "inf" || body == "nan") {
      v.type = Type::Float;
      v.floating = body == "inf" ? std::numeric_limits<double>::infinity()
                                 : std::numeric_limits<double>::quiet_NaN();
      if (negative)
        v.floating = -v.floating;
      return;
    }

    // Underscores must sit between digits.
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (body[i] != '_')
        continue;
      if (i == 0 || i + 1 == body.size() || !std::isxdigit(static_cast<unsigned char>(body[i - 1])) ||
          !std::isxdigit(static_cast<unsigned char>(body[i + 1])))
        error("misplaced underscore in number");
    }
    std::string digits;
    std::copy_if(body.begin(), body.end(), std::back_inserter(digits), [](char c) { return c != '_'; });

    try {
      if (digits.size() > 2 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'o' || digits[1] == 'b')) {
        if (raw.front() == '+' || raw.front() == '-')
          error("sign on prefixed integer");
        const int base = digits[1] == 'x' ? 16 : digits[1] == 'o' ? 8 : 2;
        std::size_t used = 0;
        v.integer = static_cast<std::int64_t>(std::stoull(digits.substr(2), &used, base));
        if (used != digits.size() - 2)
          error("invalid integer");
        v.type = Type::Integer;
        return;
      }
      const bool is_float = digits.find_first_of(".eE") != std::string::npos;
      if (digits.empty() || !text::is_digit(digits.front()))
        error("invalid value '" + raw + "'");
      if (digits.size() > 1 && digits[0] == '0' && text::is_digit(digits[1]))
        error("leading zero in number");
      std::size_t used = 0;
      if (is_float) {
        const auto dot = digits.find('.');
        if (dot != std::string::npos && (dot + 1 >= digits.size() || !text::is_digit(digits[dot + 1])))
          error("invalid float");
        v.floating = std::stod(digits, &used);
        if (negative)
          v.floating = -v.floating;
        v.type = Type::Float;
      } else {
        v.integer = std::stoll(digits, &used);
        if (negative)
          v.integer = -v.integer;
        v.type = Type::Integer;
      }
      if (used != digits.size())
        error("invalid number '" + raw + "'");
    } catch (const std::logic_error &) {
      error("invalid number '" + raw + "'");
    }
  }

  static Value make_table() {
    Value t;
    t.type = Type::Table;
    return t;
  }

  Value &resolve_section(Value &root, const std::vector<std::string> &path) {
    Value *current = &root;
    for (const auto &key : path) {
      current = current->find(key);
      if (current->array_of_tables)
        current = &current->array.back();
    }
    return *current;
  }

  void insert_dotted(Value &table, const std::vector<std::string> &keys, Value value,
                     std::size_t key_start, bool inside_inline = false) {
    Value *current = &table;
    for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
      Value *next = current->find(keys[i]);
      if (!next) {
        Value t = make_table();
        t.dotted_defined = true;
        t.key_begin = key_start;
        current->table.emplace_back(keys[i], std::move(t));
        next = &current->table.back().second;
      } else if (!next->is_table() || next->array_of_tables || (next->inline_table && !inside_inline) ||
                 next->header_defined) {
        error("cannot extend '" + keys[i] + "' with a dotted key");
      }
      current = next;
    }
    if (current->find(keys.back()))
      error("duplicate key '" + keys.back() + "'");
    current->table.emplace_back(keys.back(), std::move(value));
  }

  void open_header(Value &root, const std::vector<std::string> &path, bool aot) {
    Value *current = &root;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      Value *next = current->find(path[i]);
      if (!next) {
        current->table.emplace_back(path[i], make_table());
        next = &current->table.back().second;
      } else if (next->array_of_tables) {
        next = &next->array.back();
      } else if (!next->is_table() || next->inline_table) {
        error("'" + path[i] + "' is not a table");
      }
      current = next;
    }
    Value *last = current->find(path.back());
    if (aot) {
      if (!last) {
        Value arr;
        arr.type = Type::Array;
        arr.array_of_tables = true;
        current->table.emplace_back(path.back(), std::move(arr));
        last = &current->table.back().second;
      } else if (!last->array_of_tables) {
        error("cannot append to static array '" + path.back() + "'");
      }
      Value element = make_table();
      element.header_defined = true;
      last->array.push_back(std::move(element));
      return;
    }
    if (!last) {
      Value t = make_table();
      t.header_defined = true;
      current->table.emplace_back(path.back(), std::move(t));
      return;
    }
    if (!last->is_table() || last->inline_table || last->header_defined || last->dotted_defined ||
        last->array_of_tables)
      error("table '" + path.back() + "' defined twice");
    last->header_defined = true;
  }
};

} // namespace

Document parse(std::string_view content) { return Parser(content).run(); }

} // namespace pytrim::toml
