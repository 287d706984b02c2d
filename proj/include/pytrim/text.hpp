#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace pytrim::text {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}
inline bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_alnum(char c) { return is_alpha(c) || is_digit(c); }
inline char to_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }
inline char to_upper(char c) { return (c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c; }

std::string_view trim(std::string_view s);
std::string_view trim_left(std::string_view s);
std::string_view trim_right(std::string_view s);
std::string lower(std::string_view s);
std::string upper(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);
bool iequals(std::string_view a, std::string_view b);
std::string join(const std::vector<std::string> &parts, std::string_view sep);

inline constexpr std::string_view kBom = "\xEF\xBB\xBF";
std::string_view strip_bom(std::string_view s);

/// Lines including their terminators; a final unterminated line is kept.
std::vector<std::string_view> split_lines(std::string_view content);

/// The line without its `\n` / `\r\n` terminator.
std::string_view chomp(std::string_view line);

/// "\r\n" when CRLF terminators dominate, "\n" otherwise.
std::string_view dominant_eol(std::string_view content);

bool is_valid_utf8(std::string_view s);

/// Maps byte offsets to 1-based line numbers and back.
class LineIndex {
public:
  explicit LineIndex(std::string_view content);

  int line_of(std::size_t offset) const;
  std::size_t line_start(int line) const;
  /// Offset just past the line terminator (or end of content).
  std::size_t line_end(int line) const;
  int line_count() const { return static_cast<int>(starts_.size()); }

private:
  std::vector<std::size_t> starts_;
  std::size_t size_;
};

/// Whole-file byte read; throws Error(IoError).
std::string read_file(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, std::string_view content);

/// fnmatch-style glob with `*`, `?`, `[...]`; `*` also crosses `/`.
bool glob_match(std::string_view pattern, std::string_view subject);

} // namespace pytrim::text
