#include "pytrim/setup_py.hpp"

#include "pytrim/python_source.hpp"
#include "pytrim/text.hpp"

#include <algorithm>
#include <array>

namespace pytrim::setup_py {

namespace {

using python::Token;
using python::TokenType;

struct Range {
  std::size_t begin;
  std::size_t end; ///< exclusive
};

class Analyzer {
public:
  explicit Analyzer(const python::Module &module) : module_(module) {
    for (const auto &line : module.lines()) {
      for (auto index : module.code_tokens(line))
        flat_.push_back(index);
      flat_.push_back(line.newline);
    }
  }

  Extraction run() {
    std::vector<Range> calls;
    for (std::size_t k = 0; k + 1 < flat_.size(); ++k) {
      if (!tok(k).is_name("setup") || !tok(k + 1).is_op("("))
        continue;
      if (k > 0 && tok(k - 1).is_name("def"))
        continue;
      if (k > 0 && tok(k - 1).is_op(".")) {
        static constexpr std::array<std::string_view, 3> owners = {"setuptools", "core", "distutils"};
        if (k < 2 || std::find(owners.begin(), owners.end(), tok(k - 2).text) == owners.end())
          continue;
      }
      calls.push_back({k + 1, match_close(k + 1)});
    }

    for (const auto &call : calls) {
      out_.has_setup_call = true;
      setup_call_begin_ = std::min(setup_call_begin_, tok(call.begin).begin);
      for (const auto &arg : split_top(call.begin + 1, call.end, ",")) {
        if (arg.begin >= arg.end)
          continue;
        if (tok(arg.begin).is_op("**")) {
          out_.dynamic = true;
          continue;
        }
        if (arg.end - arg.begin < 3 || tok(arg.begin).type != TokenType::Name || !tok(arg.begin + 1).is_op("="))
          continue;
        const auto name = tok(arg.begin).text;
        if (name == "name" && out_.project_name.empty()) {
          if (auto v = make_element({arg.begin + 2, arg.end}).value)
            out_.project_name = *v;
        } else if (name == "install_requires") {
          note_anchor(tok(arg.begin).line);
          analyze_list(arg.begin + 2, arg.end, "", 0);
        } else if (name == "extras_require") {
          note_anchor(tok(arg.begin).line);
          analyze_dict(arg.begin + 2, arg.end, 0);
        }
      }
    }

    if (!out_.has_setup_call) {
      // Snippet-style files that only assign the dependency lists.
      if (auto expr = find_assignment("install_requires")) {
        note_anchor(tok(expr->begin).line);
        analyze_list(expr->begin, expr->end, "", 1);
      }
      if (auto expr = find_assignment("extras_require")) {
        note_anchor(tok(expr->begin).line);
        analyze_dict(expr->begin, expr->end, 1);
      }
    }

    collect_referenced_files();
    return std::move(out_);
  }

private:
  const python::Module &module_;
  std::vector<std::size_t> flat_;
  Extraction out_;
  std::size_t setup_call_begin_ = static_cast<std::size_t>(-1);

  const Token &tok(std::size_t k) const { return module_.tokens()[flat_[k]]; }

  void note_anchor(int line) {
    if (out_.anchor_line == 0)
      out_.anchor_line = line;
  }

  std::size_t match_close(std::size_t open) const {
    int depth = 0;
    for (std::size_t k = open; k < flat_.size(); ++k) {
      const auto &t = tok(k);
      if (t.type != TokenType::Op)
        continue;
      if (t.text == "(" || t.text == "[" || t.text == "{")
        ++depth;
      else if (t.text == ")" || t.text == "]" || t.text == "}") {
        if (--depth == 0)
          return k;
      }
    }
    return flat_.size() - 1;
  }

  std::vector<Range> split_top(std::size_t begin, std::size_t end, std::string_view sep) const {
    std::vector<Range> parts;
    int depth = 0;
    std::size_t start = begin;
    for (std::size_t k = begin; k < end; ++k) {
      const auto &t = tok(k);
      if (t.type != TokenType::Op)
        continue;
      if (t.text == "(" || t.text == "[" || t.text == "{")
        ++depth;
      else if (t.text == ")" || t.text == "]" || t.text == "}")
        --depth;
      else if (depth == 0 && t.text == sep) {
        parts.push_back({start, k});
        start = k + 1;
      }
    }
    if (start < end)
      parts.push_back({start, end});
    return parts;
  }

  bool is_display(std::size_t begin, std::size_t end, std::string_view open) const {
    return end > begin + 1 && tok(begin).is_op(open) && match_close(begin) == end - 1;
  }

  Element make_element(Range r) const {
    Element e;
    e.begin = tok(r.begin).begin;
    e.end = tok(r.end - 1).end;
    e.line = tok(r.begin).line;
    std::string joined;
    for (std::size_t k = r.begin; k < r.end; ++k) {
      if (tok(k).type != TokenType::String)
        return e;
      auto v = python::string_literal_value(tok(k).text);
      if (!v)
        return e;
      joined += *v;
    }
    e.value = std::move(joined);
    return e;
  }

  std::optional<std::size_t> analyze_list(std::size_t begin, std::size_t end, const std::string &group, int depth) {
    if (begin >= end || depth > 8) {
      out_.dynamic = true;
      return std::nullopt;
    }
    const auto operands = split_top(begin, end, "+");
    std::optional<std::size_t> only_sequence;
    for (const auto &op : operands) {
      if (is_display(op.begin, op.end, "[") || is_display(op.begin, op.end, "(")) {
        Sequence seq;
        seq.open = tok(op.begin).begin;
        seq.close = tok(op.end - 1).begin;
        const auto index = out_.sequences.size();
        for (const auto &item : split_top(op.begin + 1, op.end - 1, ",")) {
          auto element = make_element(item);
          if (element.value) {
            out_.requirements.push_back(Requirement{*element.value, group, element.line, index, seq.items.size()});
          } else {
            out_.dynamic = true;
          }
          seq.items.push_back(std::move(element));
        }
        out_.sequences.push_back(std::move(seq));
        if (operands.size() == 1)
          only_sequence = index;
      } else if (op.end - op.begin == 1 && tok(op.begin).type == TokenType::Name) {
        auto expr = find_assignment(tok(op.begin).text);
        if (!expr) {
          out_.dynamic = true;
          continue;
        }
        auto nested = analyze_list(expr->begin, expr->end, group, depth + 1);
        if (operands.size() == 1)
          only_sequence = nested;
      } else {
        out_.dynamic = true;
      }
    }
    return only_sequence;
  }

  void analyze_dict(std::size_t begin, std::size_t end, int depth) {
    if (begin >= end || depth > 8) {
      out_.dynamic = true;
      return;
    }
    if (end - begin == 1 && tok(begin).type == TokenType::Name) {
      if (auto expr = find_assignment(tok(begin).text))
        analyze_dict(expr->begin, expr->end, depth + 1);
      else
        out_.dynamic = true;
      return;
    }
    if (!is_display(begin, end, "{")) {
      out_.dynamic = true;
      return;
    }
    Sequence dict;
    dict.open = tok(begin).begin;
    dict.close = tok(end - 1).begin;
    const auto dict_index = out_.sequences.size();
    out_.sequences.push_back(dict);

    std::vector<Element> items;
    for (const auto &item : split_top(begin + 1, end - 1, ",")) {
      Element element;
      element.begin = tok(item.begin).begin;
      element.end = tok(item.end - 1).end;
      element.line = tok(item.begin).line;
      const auto item_index = items.size();
      items.push_back(element);

      if (tok(item.begin).is_op("**")) {
        out_.dynamic = true;
        continue;
      }
      const auto pieces = split_top(item.begin, item.end, ":");
      if (pieces.size() != 2) {
        out_.dynamic = true;
        continue;
      }
      const auto key = make_element(pieces[0]);
      if (!key.value) {
        out_.dynamic = true;
        continue;
      }
      items[item_index].value = key.value;
      ExtrasGroup group{*key.value, dict_index, item_index, std::nullopt};
      group.list_sequence = analyze_list(pieces[1].begin, pieces[1].end, *key.value, depth + 1);
      out_.extras_groups.push_back(std::move(group));
    }
    out_.sequences[dict_index].items = std::move(items);
  }

  // Right-hand side of the last plain `name = expr` before the setup call.
  // Mutations through methods or augmented assignment make it dynamic.
  std::optional<Range> find_assignment(std::string_view name) {
    std::optional<Range> found;
    for (std::size_t k = 0; k + 1 < flat_.size(); ++k) {
      if (!tok(k).is_name(name))
        continue;
      const auto &next = tok(k + 1);
      if (next.is_op("+=") || next.is_op("|=")) {
        out_.dynamic = true;
      } else if (next.is_op(".") && k + 2 < flat_.size()) {
        static constexpr std::array<std::string_view, 6> mutators = {"append", "extend", "insert",
                                                                     "update", "remove", "pop"};
        if (std::find(mutators.begin(), mutators.end(), tok(k + 2).text) != mutators.end())
          out_.dynamic = true;
      }
    }
    std::size_t offset = 0;
    for (const auto &line : module_.lines()) {
      const auto code = module_.code_tokens(line);
      const auto shape = module_.shape(line);
      for (const auto &stmt : shape.statements) {
        const std::size_t first = offset + stmt.first;
        const std::size_t last = offset + stmt.last;
        if (last - first >= 3 && tok(first).is_name(name) && tok(first + 1).is_op("=") &&
            tok(first).begin < setup_call_begin_) {
          // Chained targets (`a = b = ...`) are not followed.
          if (split_top(first + 2, last, "=").size() == 1)
            found = Range{first + 2, last};
        }
      }
      offset += code.size() + 1;
    }
    return found;
  }

  void collect_referenced_files() {
    auto consider = [&](std::string path) {
      if (path.starts_with("./"))
        path.erase(0, 2);
      const auto lowered = text::lower(path);
      if (path.empty() || path.find_first_of(" \t\n\\") != std::string::npos)
        return;
      if (!lowered.ends_with(".txt") && !lowered.ends_with(".in"))
        return;
      if (std::find(out_.referenced_files.begin(), out_.referenced_files.end(), path) == out_.referenced_files.end())
        out_.referenced_files.push_back(std::move(path));
    };
    for (std::size_t k = 0; k < flat_.size(); ++k) {
      if (tok(k).type == TokenType::String) {
        if (auto v = python::string_literal_value(tok(k).text))
          consider(*v);
      }
      if (tok(k).is_name("join") && k + 1 < flat_.size() && tok(k + 1).is_op("(") && k > 0 &&
          tok(k - 1).is_op(".")) {
        const auto close = match_close(k + 1);
        std::vector<std::string> tail;
        for (const auto &arg : split_top(k + 2, close, ",")) {
          const auto element = make_element(arg);
          if (element.value)
            tail.push_back(*element.value);
          else
            tail.clear();
        }
        if (!tail.empty())
          consider(text::join(tail, "/"));
      }
    }
    auto &refs = out_.referenced_files;
    std::erase_if(refs, [&](const std::string &path) {
      return std::any_of(refs.begin(), refs.end(),
                         [&](const std::string &other) { return other.ends_with("/" + path); });
    });
  }
};

} // namespace

Extraction extract(std::string_view source) {
  const python::Module module(source);
  return Analyzer(module).run();
}

} // namespace pytrim::setup_py
