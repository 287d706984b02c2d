#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pytrim::python {

enum class TokenType { Name, Number, String, Op, Comment, Newline, Nl, Indent, Dedent, EndMarker };

struct Token {
  TokenType type;
  std::string_view text;
  std::size_t begin = 0; ///< byte offsets into the source
  std::size_t end = 0;
  int line = 1;          ///< line of the first byte
  int end_line = 1;      ///< line of the last byte

  bool is_op(std::string_view op) const { return type == TokenType::Op && text == op; }
  bool is_name(std::string_view name) const { return type == TokenType::Name && text == name; }
};

/// Tokenizes like CPython's tokenize module (NEWLINE/NL distinction,
/// INDENT/DEDENT, implicit and explicit line joining). Throws
/// Error(PySyntaxError) for unterminated strings, unbalanced brackets and
/// inconsistent dedents.
std::vector<Token> tokenize(std::string_view source);

/// One logical line: tokens [first, newline) plus the NEWLINE token.
struct LogicalLine {
  std::size_t first = 0;
  std::size_t newline = 0;
  int depth = 0;           ///< indentation level
  int start_line = 0;
  int end_line = 0;
  std::optional<std::size_t> parent; ///< index of the enclosing block header
  bool opens_block = false;          ///< ends with `:` and owns an indented suite
};

/// A `;`-separated piece of a logical line, as a code-token index range.
struct SimpleStatement {
  std::size_t first = 0;
  std::size_t last = 0; ///< exclusive
};

struct LineShape {
  /// Tokens of a compound header with an inline body (`if x: a; b`), or empty.
  std::optional<SimpleStatement> header;
  std::vector<SimpleStatement> statements;
};

class Module {
public:
  /// Tokenizes and checks block structure; throws Error(PySyntaxError).
  explicit Module(std::string_view source);

  std::string_view source() const { return source_; }
  const std::vector<Token> &tokens() const { return tokens_; }
  const std::vector<LogicalLine> &lines() const { return lines_; }

  /// Code tokens of a logical line (comments and NL removed).
  std::vector<std::size_t> code_tokens(const LogicalLine &line) const;
  /// Splits a logical line into header + simple statements over indices
  /// into code_tokens(line).
  LineShape shape(const LogicalLine &line) const;

private:
  std::string_view source_;
  std::vector<Token> tokens_;
  std::vector<LogicalLine> lines_;
};

/// Tokenizing, block structure and the grammar of import statements.
/// Throws Error(PySyntaxError).
void validate(std::string_view source);

bool is_valid(std::string_view source);

/// Value of a plain (non-f, non-bytes) string literal token.
std::optional<std::string> string_literal_value(std::string_view token_text);

struct ImportName {
  std::string name;                 ///< dotted path for `import`, symbol for `from`
  std::optional<std::string> alias;
  std::size_t first = 0;            ///< token indices, [first, last)
  std::size_t last = 0;
};

struct ImportStatement {
  bool from_import = false;
  int relative_level = 0;   ///< leading dots of `from`
  std::string module;       ///< `from` module (empty when only dots)
  std::vector<ImportName> names;
  std::size_t line_index = 0; ///< into Module::lines()
  std::size_t statement_index = 0; ///< into shape().statements
  std::size_t first_token = 0;
  std::size_t last_token = 0; ///< exclusive token index
};

std::vector<ImportStatement> find_import_statements(const Module &module);

struct DynamicImport {
  std::string module;
  bool dunder = false; ///< `__import__` rather than `importlib.import_module`
  int line = 0;
};

/// `importlib.import_module("x")`, `import_module("x")`, `__import__("x")`.
std::vector<DynamicImport> find_dynamic_imports(const Module &module);

/// Token stream without comments, NL tokens or trailing whitespace; used
/// to compare sources while ignoring non-semantic differences.
std::vector<std::string> semantic_tokens(std::string_view source);

} // namespace pytrim::python
