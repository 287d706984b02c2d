#include "pytrim/python_source.hpp"

#include "pytrim/error.hpp"
#include "pytrim/text.hpp"

#include <algorithm>
#include <array>

namespace pytrim::python {

namespace {

[[noreturn]] void syntax_error(std::string_view source, std::size_t offset, const std::string &what) {
  const int line = text::LineIndex(source).line_of(std::min(offset, source.size()));
  fail(ErrorKind::PySyntaxError, "Python line " + std::to_string(line) + ": " + what);
}

bool is_ident_start(char c) {
  return text::is_alpha(c) || c == '_' || static_cast<unsigned char>(c) >= 0x80;
}

bool is_ident_char(char c) { return is_ident_start(c) || text::is_digit(c); }

// Length of a string prefix (r, b, u, f, rb, br, fr, rf in any case) that
// is immediately followed by a quote, or 0.
std::size_t string_prefix_length(std::string_view s) {
  auto is_prefix_char = [](char c) {
    const char l = text::to_lower(c);
    return l == 'r' || l == 'b' || l == 'u' || l == 'f';
  };
  std::size_t n = 0;
  while (n < 2 && n < s.size() && is_prefix_char(s[n]))
    ++n;
  if (n < s.size() && (s[n] == '"' || s[n] == '\'')) {
    const auto prefix = text::lower(s.substr(0, n));
    static constexpr std::array<std::string_view, 9> valid = {"", "r", "u", "b", "f", "br", "rb", "fr", "rf"};
    if (std::find(valid.begin(), valid.end(), prefix) != valid.end())
      return n;
  }
  return static_cast<std::size_t>(-1);
}

constexpr std::array<std::string_view, 5> kOps3 = {"**=", "//=", ">>=", "<<=", "..."};
constexpr std::array<std::string_view, 21> kOps2 = {"**", "//", ">>", "<<", "<=", ">=", "==",
                                                    "!=", "->", "+=", "-=", "*=", "/=", "%=",
                                                    "&=", "|=", "^=", "@=", ":=", "<>", "!="};
constexpr std::string_view kOps1 = "+-*/%@&|^~<>()[]{},:.;=!";

} // namespace

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> tokens;
  const std::size_t n = src.size();
  std::size_t pos = src.starts_with(text::kBom) ? text::kBom.size() : 0;

  std::vector<int> indents{0};
  std::vector<char> brackets;
  bool at_line_start = true;
  bool continued = false;
  bool line_has_code = false;

  auto emit = [&](TokenType type, std::size_t begin, std::size_t end) {
    tokens.push_back(Token{type, src.substr(begin, end - begin), begin, end, 0, 0});
  };

  while (pos < n) {
    if (at_line_start && brackets.empty() && !continued) {
      int col = 0;
      std::size_t p = pos;
      while (p < n) {
        if (src[p] == ' ')
          ++col;
        else if (src[p] == '\t')
          col = (col / 8 + 1) * 8;
        else if (src[p] == '\f')
          col = 0;
        else
          break;
        ++p;
      }
      if (p >= n) {
        pos = p;
        break;
      }
      if (src[p] == '#' || src[p] == '\n' || src[p] == '\r') {
        pos = p;
        if (src[p] == '#') {
          std::size_t e = p;
          while (e < n && src[e] != '\n' && src[e] != '\r')
            ++e;
          emit(TokenType::Comment, p, e);
          pos = e;
        }
        if (pos < n) {
          const std::size_t b = pos;
          pos += (src[pos] == '\r' && pos + 1 < n && src[pos + 1] == '\n') ? 2 : 1;
          emit(TokenType::Nl, b, pos);
        }
        continue;
      }
      if (col > indents.back()) {
        indents.push_back(col);
        emit(TokenType::Indent, pos, p);
      } else {
        while (col < indents.back()) {
          indents.pop_back();
          emit(TokenType::Dedent, p, p);
        }
        if (col != indents.back())
          syntax_error(src, p, "unindent does not match any outer indentation level");
      }
      pos = p;
      at_line_start = false;
    }
    continued = false;
    at_line_start = false;

    const char c = src[pos];
    if (c == ' ' || c == '\t' || c == '\f') {
      ++pos;
      continue;
    }
    if (c == '#') {
      std::size_t e = pos;
      while (e < n && src[e] != '\n' && src[e] != '\r')
        ++e;
      emit(TokenType::Comment, pos, e);
      pos = e;
      continue;
    }
    if (c == '\n' || c == '\r') {
      const std::size_t b = pos;
      pos += (c == '\r' && pos + 1 < n && src[pos + 1] == '\n') ? 2 : 1;
      if (!brackets.empty() || !line_has_code) {
        emit(TokenType::Nl, b, pos);
      } else {
        emit(TokenType::Newline, b, pos);
        line_has_code = false;
      }
      at_line_start = brackets.empty();
      continue;
    }
    if (c == '\\') {
      std::size_t p = pos + 1;
      if (p < n && src[p] == '\r')
        ++p;
      if (p >= n)
        syntax_error(src, pos, "unexpected end of file after line continuation");
      if (src[p] != '\n')
        syntax_error(src, pos, "unexpected character after line continuation character");
      pos = p + 1;
      continued = true;
      if (pos >= n)
        syntax_error(src, pos, "unexpected end of file after line continuation");
      continue;
    }

    line_has_code = true;
    const auto prefix = string_prefix_length(src.substr(pos));
    if (prefix != static_cast<std::size_t>(-1)) {
      const std::size_t begin = pos;
      std::size_t p = pos + prefix;
      const char quote = src[p];
      const bool triple = p + 2 < n && src[p + 1] == quote && src[p + 2] == quote;
      p += triple ? 3 : 1;
      while (true) {
        if (p >= n)
          syntax_error(src, begin, "unterminated string literal");
        const char d = src[p];
        if (d == '\\') {
          p += 2;
          if (p <= n && src[p - 1] == '\r' && p < n && src[p] == '\n')
            ++p;
          continue;
        }
        if (!triple && (d == '\n' || d == '\r'))
          syntax_error(src, begin, "unterminated string literal");
        if (d == quote) {
          if (!triple) {
            ++p;
            break;
          }
          if (p + 2 < n && src[p + 1] == quote && src[p + 2] == quote) {
            p += 3;
            break;
          }
        }
        ++p;
      }
      if (p > n)
        syntax_error(src, begin, "unterminated string literal");
      emit(TokenType::String, begin, p);
      pos = p;
      continue;
    }
    if (is_ident_start(c)) {
      std::size_t e = pos;
      while (e < n && is_ident_char(src[e]))
        ++e;
      emit(TokenType::Name, pos, e);
      pos = e;
      continue;
    }
    if (text::is_digit(c) || (c == '.' && pos + 1 < n && text::is_digit(src[pos + 1]))) {
      std::size_t e = pos;
      while (e < n) {
        const char d = src[e];
        if (text::is_alnum(d) || d == '_' || d == '.') {
          ++e;
        } else if ((d == '+' || d == '-') && (text::to_lower(src[e - 1]) == 'e') &&
                   !(src.substr(pos, 2) == "0x" || src.substr(pos, 2) == "0X")) {
          ++e;
        } else {
          break;
        }
      }
      emit(TokenType::Number, pos, e);
      pos = e;
      continue;
    }

    std::size_t len = 0;
    for (auto op : kOps3) {
      if (src.substr(pos).starts_with(op)) {
        len = 3;
        break;
      }
    }
    if (!len) {
      for (auto op : kOps2) {
        if (src.substr(pos).starts_with(op)) {
          len = 2;
          break;
        }
      }
    }
    if (!len && kOps1.find(c) != std::string_view::npos)
      len = 1;
    if (!len)
      syntax_error(src, pos, std::string("invalid character '") + c + "'");

    if (len == 1) {
      if (c == '(' || c == '[' || c == '{') {
        brackets.push_back(c);
      } else if (c == ')' || c == ']' || c == '}') {
        const char open = c == ')' ? '(' : c == ']' ? '[' : '{';
        if (brackets.empty() || brackets.back() != open)
          syntax_error(src, pos, std::string("unmatched '") + c + "'");
        brackets.pop_back();
      }
    }
    emit(TokenType::Op, pos, pos + len);
    pos += len;
  }

  if (!brackets.empty())
    syntax_error(src, n, "unexpected EOF in multi-line statement");
  if (line_has_code)
    emit(TokenType::Newline, n, n);
  while (indents.size() > 1) {
    indents.pop_back();
    emit(TokenType::Dedent, n, n);
  }
  emit(TokenType::EndMarker, n, n);

  const text::LineIndex index(src);
  for (auto &tok : tokens) {
    tok.line = index.line_of(tok.begin);
    tok.end_line = tok.end > tok.begin ? index.line_of(tok.end - 1) : tok.line;
  }
  return tokens;
}

namespace {

bool is_compound_keyword(std::string_view word) {
  static constexpr std::array<std::string_view, 13> words = {
      "if", "elif", "else", "while", "for", "try", "except", "finally", "with", "def", "class", "async", "match"};
  return std::find(words.begin(), words.end(), word) != words.end();
}

} // namespace

Module::Module(std::string_view source) : source_(source), tokens_(tokenize(source)) {
  int depth = 0;
  std::vector<std::size_t> opener_at_depth;
  std::size_t i = 0;
  while (i < tokens_.size()) {
    const auto type = tokens_[i].type;
    if (type == TokenType::Indent) {
      ++depth;
      ++i;
      continue;
    }
    if (type == TokenType::Dedent) {
      --depth;
      ++i;
      continue;
    }
    if (type == TokenType::Comment || type == TokenType::Nl || type == TokenType::Newline) {
      ++i;
      continue;
    }
    if (type == TokenType::EndMarker)
      break;

    LogicalLine line;
    line.first = i;
    line.depth = depth;
    while (i < tokens_.size() && tokens_[i].type != TokenType::Newline)
      ++i;
    line.newline = i;
    line.start_line = tokens_[line.first].line;
    line.end_line = tokens_[line.newline].line;
    if (tokens_[line.newline].begin == tokens_[line.newline].end && line.newline > line.first)
      line.end_line = tokens_[line.newline - 1].end_line;

    const auto code = code_tokens(line);
    line.opens_block = !code.empty() && tokens_[code.back()].is_op(":");

    if (!lines_.empty()) {
      const auto &prev = lines_.back();
      if (prev.opens_block && line.depth != prev.depth + 1)
        syntax_error(source_, tokens_[line.first].begin, "expected an indented block");
      if (!prev.opens_block && line.depth > prev.depth)
        syntax_error(source_, tokens_[line.first].begin, "unexpected indent");
    } else if (line.depth > 0) {
      syntax_error(source_, tokens_[line.first].begin, "unexpected indent");
    }

    opener_at_depth.resize(static_cast<std::size_t>(line.depth) + 1);
    if (line.depth > 0)
      line.parent = opener_at_depth[static_cast<std::size_t>(line.depth) - 1];
    if (line.opens_block)
      opener_at_depth[static_cast<std::size_t>(line.depth)] = lines_.size();
    lines_.push_back(line);
    ++i;
  }
  if (!lines_.empty() && lines_.back().opens_block)
    syntax_error(source_, source_.size(), "expected an indented block at end of file");
}

std::vector<std::size_t> Module::code_tokens(const LogicalLine &line) const {
  std::vector<std::size_t> out;
  for (std::size_t i = line.first; i < line.newline; ++i) {
    const auto type = tokens_[i].type;
    if (type != TokenType::Comment && type != TokenType::Nl)
      out.push_back(i);
  }
  return out;
}

LineShape Module::shape(const LogicalLine &line) const {
  const auto code = code_tokens(line);
  LineShape shape;
  std::size_t start = 0;

  if (!code.empty() && tokens_[code[0]].type == TokenType::Name && is_compound_keyword(tokens_[code[0]].text)) {
    bool compound = true;
    // `match` is a soft keyword; `match = 1` or `match(x)` are ordinary statements.
    if (tokens_[code[0]].text == "match")
      compound = line.opens_block;
    if (compound) {
      int depth = 0;
      int lambdas = 0;
      for (std::size_t k = 0; k < code.size(); ++k) {
        const auto &tok = tokens_[code[k]];
        if (tok.type == TokenType::Op) {
          if (tok.text == "(" || tok.text == "[" || tok.text == "{")
            ++depth;
          else if (tok.text == ")" || tok.text == "]" || tok.text == "}")
            --depth;
          else if (tok.text == ":" && depth == 0) {
            if (lambdas > 0) {
              --lambdas;
              continue;
            }
            shape.header = SimpleStatement{0, k + 1};
            start = k + 1;
            break;
          }
        } else if (tok.is_name("lambda") && depth == 0) {
          ++lambdas;
        }
      }
    }
  }

  int depth = 0;
  std::size_t piece = start;
  for (std::size_t k = start; k < code.size(); ++k) {
    const auto &tok = tokens_[code[k]];
    if (tok.type != TokenType::Op)
      continue;
    if (tok.text == "(" || tok.text == "[" || tok.text == "{")
      ++depth;
    else if (tok.text == ")" || tok.text == "]" || tok.text == "}")
      --depth;
    else if (tok.text == ";" && depth == 0) {
      shape.statements.push_back({piece, k});
      piece = k + 1;
    }
  }
  if (piece < code.size())
    shape.statements.push_back({piece, code.size()});
  return shape;
}

namespace {

// Parses an import statement over code token indices [first, last).
// Returns nullopt for non-import statements; throws for malformed imports.
std::optional<ImportStatement> parse_import(const Module &module, const std::vector<std::size_t> &code,
                                            std::size_t first, std::size_t last) {
  const auto &toks = module.tokens();
  auto tok = [&](std::size_t k) -> const Token & { return toks[code[k]]; };
  if (first >= last)
    return std::nullopt;
  const bool is_import = tok(first).is_name("import");
  const bool is_from = tok(first).is_name("from");
  if (!is_import && !is_from)
    return std::nullopt;

  auto bad = [&](std::size_t k, const std::string &what) {
    syntax_error(module.source(), toks[code[std::min(k, last - 1)]].begin, what);
  };

  ImportStatement stmt;
  stmt.from_import = is_from;
  stmt.first_token = code[first];
  stmt.last_token = code[last - 1] + 1;
  std::size_t k = first + 1;

  auto dotted = [&](std::string &out) {
    if (k >= last || tok(k).type != TokenType::Name)
      bad(k, "expected a module name");
    out = std::string(tok(k).text);
    ++k;
    while (k + 1 < last && tok(k).is_op(".") && tok(k + 1).type == TokenType::Name) {
      out += '.';
      out += tok(k + 1).text;
      k += 2;
    }
    if (k < last && tok(k).is_op("."))
      bad(k, "trailing dot in module name");
  };
  auto alias = [&](ImportName &name) {
    if (k < last && tok(k).is_name("as")) {
      ++k;
      if (k >= last || tok(k).type != TokenType::Name)
        bad(k, "expected a name after 'as'");
      name.alias = std::string(tok(k).text);
      ++k;
    }
  };

  if (is_import) {
    while (true) {
      ImportName name;
      name.first = code[k < last ? k : last - 1];
      dotted(name.name);
      alias(name);
      name.last = code[k - 1] + 1;
      stmt.names.push_back(std::move(name));
      if (k == last)
        break;
      if (!tok(k).is_op(","))
        bad(k, "expected ',' in import");
      ++k;
      if (k == last)
        bad(k, "trailing comma in import");
    }
    return stmt;
  }

  while (k < last && (tok(k).is_op(".") || tok(k).is_op("..."))) {
    stmt.relative_level += tok(k).is_op(".") ? 1 : 3;
    ++k;
  }
  if (k < last && !tok(k).is_name("import"))
    dotted(stmt.module);
  if (stmt.module.empty() && stmt.relative_level == 0)
    bad(k, "expected a module after 'from'");
  if (k >= last || !tok(k).is_name("import"))
    bad(k, "expected 'import'");
  ++k;
  if (k < last && tok(k).is_op("*")) {
    ImportName star;
    star.name = "*";
    star.first = code[k];
    star.last = code[k] + 1;
    stmt.names.push_back(star);
    if (++k != last)
      bad(k, "unexpected tokens after '*'");
    return stmt;
  }
  const bool parens = k < last && tok(k).is_op("(");
  if (parens)
    ++k;
  while (true) {
    if (k >= last || tok(k).type != TokenType::Name)
      bad(k, "expected a name to import");
    ImportName name;
    name.first = code[k];
    name.name = std::string(tok(k).text);
    ++k;
    alias(name);
    name.last = code[k - 1] + 1;
    stmt.names.push_back(std::move(name));
    if (k < last && tok(k).is_op(",")) {
      ++k;
      if (parens && k < last && tok(k).is_op(")"))
        break;
      if (k == last)
        bad(k, "trailing comma without parentheses");
      continue;
    }
    break;
  }
  if (parens) {
    if (k >= last || !tok(k).is_op(")"))
      bad(k, "expected ')'");
    ++k;
  }
  if (k != last)
    bad(k, "unexpected tokens in import");
  return stmt;
}

} // namespace

std::vector<ImportStatement> find_import_statements(const Module &module) {
  std::vector<ImportStatement> out;
  for (std::size_t li = 0; li < module.lines().size(); ++li) {
    const auto &line = module.lines()[li];
    const auto code = module.code_tokens(line);
    const auto shape = module.shape(line);
    for (std::size_t si = 0; si < shape.statements.size(); ++si) {
      const auto &stmt = shape.statements[si];
      if (auto parsed = parse_import(module, code, stmt.first, stmt.last)) {
        parsed->line_index = li;
        parsed->statement_index = si;
        out.push_back(std::move(*parsed));
      }
    }
  }
  return out;
}

void validate(std::string_view source) {
  const Module module(source);
  for (const auto &line : module.lines()) {
    const auto code = module.code_tokens(line);
    const auto shape = module.shape(line);
    // Empty pieces only arise from `;;` or a leading `;`.
    std::size_t expected = shape.header ? shape.header->last : 0;
    for (const auto &stmt : shape.statements) {
      if (stmt.first != expected || stmt.first >= stmt.last)
        syntax_error(source, module.tokens()[code[std::min(stmt.first, code.size() - 1)]].begin,
                     "empty statement");
      expected = stmt.last + 1;
      parse_import(module, code, stmt.first, stmt.last);
    }
    if (shape.header && !line.opens_block && shape.statements.empty())
      syntax_error(source, module.tokens()[line.first].begin, "missing statement after ':'");
  }
}

bool is_valid(std::string_view source) {
  try {
    validate(source);
    return true;
  } catch (const Error &) {
    return false;
  }
}

std::optional<std::string> string_literal_value(std::string_view token_text) {
  std::size_t prefix = 0;
  bool raw = false;
  while (prefix < token_text.size() && token_text[prefix] != '"' && token_text[prefix] != '\'') {
    const char l = text::to_lower(token_text[prefix]);
    if (l == 'f' || l == 'b')
      return std::nullopt;
    if (l == 'r')
      raw = true;
    ++prefix;
  }
  auto body = token_text.substr(prefix);
  if (body.size() < 2)
    return std::nullopt;
  const char quote = body.front();
  const std::size_t qlen = body.size() >= 6 && body[1] == quote && body[2] == quote ? 3 : 1;
  if (body.size() < 2 * qlen)
    return std::nullopt;
  body = body.substr(qlen, body.size() - 2 * qlen);
  if (raw)
    return std::string(body);

  std::string out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] != '\\' || i + 1 >= body.size()) {
      out += body[i];
      continue;
    }
    const char e = body[++i];
    switch (e) {
    case 'n': out += '\n'; break;
    case 't': out += '\t'; break;
    case 'r': out += '\r'; break;
    case '\\': out += '\\'; break;
    case '\'': out += '\''; break;
    case '"': out += '"'; break;
    case '0': out += '\0'; break;
    case '\n': break;
    default:
      out += '\\';
      out += e;
    }
  }
  return out;
}

std::vector<DynamicImport> find_dynamic_imports(const Module &module) {
  std::vector<DynamicImport> out;
  std::vector<std::size_t> code;
  for (std::size_t i = 0; i < module.tokens().size(); ++i) {
    const auto type = module.tokens()[i].type;
    if (type != TokenType::Comment && type != TokenType::Nl && type != TokenType::Newline &&
        type != TokenType::Indent && type != TokenType::Dedent)
      code.push_back(i);
  }
  const auto &toks = module.tokens();
  auto at = [&](std::size_t k) -> const Token & { return toks[code[k]]; };
  for (std::size_t k = 0; k + 3 < code.size(); ++k) {
    const auto &tok = at(k);
    const bool dunder = tok.is_name("__import__");
    if (!dunder && !tok.is_name("import_module"))
      continue;
    if (k > 0 && at(k - 1).is_name("def"))
      continue;
    if (!dunder && k > 0 && at(k - 1).is_op(".") && !(k > 1 && at(k - 2).is_name("importlib")))
      continue;
    if (dunder && k > 0 && at(k - 1).is_op("."))
      continue;
    if (!at(k + 1).is_op("(") || at(k + 2).type != TokenType::String)
      continue;
    if (!at(k + 3).is_op(")") && !at(k + 3).is_op(","))
      continue;
    auto value = string_literal_value(at(k + 2).text);
    if (!value || value->empty())
      continue;
    out.push_back(DynamicImport{*value, dunder, tok.line});
  }
  return out;
}

std::vector<std::string> semantic_tokens(std::string_view source) {
  std::vector<std::string> out;
  for (const auto &tok : tokenize(source)) {
    switch (tok.type) {
    case TokenType::Comment:
    case TokenType::Nl:
      break;
    case TokenType::Newline:
      out.emplace_back("<NEWLINE>");
      break;
    case TokenType::Indent:
      out.emplace_back("<INDENT>");
      break;
    case TokenType::Dedent:
      out.emplace_back("<DEDENT>");
      break;
    case TokenType::EndMarker:
      break;
    default:
      out.emplace_back(tok.text);
    }
  }
  return out;
}

} // namespace pytrim::python
