#include "pytrim/diff.hpp"

#include "pytrim/text.hpp"

#include <algorithm>
#include <vector>

namespace pytrim {

namespace {

enum class Op { Keep, Del, Add };

struct Edit {
  Op op;
  std::size_t a; ///< index into before lines (Keep/Del)
  std::size_t b; ///< index into after lines (Keep/Add)
};

// Myers' O(ND) shortest edit script.
std::vector<Edit> shortest_edit(const std::vector<std::string_view> &a, const std::vector<std::string_view> &b) {
  const long n = static_cast<long>(a.size());
  const long m = static_cast<long>(b.size());
  const long max = n + m;
  const long offset = max + 1;
  std::vector<long> v(static_cast<std::size_t>(2 * max + 3), 0);
  std::vector<std::vector<long>> trace;
  for (long d = 0; d <= max; ++d) {
    trace.push_back(v);
    bool done = false;
    for (long k = -d; k <= d; k += 2) {
      long x;
      if (k == -d || (k != d && v[offset + k - 1] < v[offset + k + 1]))
        x = v[offset + k + 1];
      else
        x = v[offset + k - 1] + 1;
      long y = x - k;
      while (x < n && y < m && a[x] == b[y]) {
        ++x;
        ++y;
      }
      v[offset + k] = x;
      if (x >= n && y >= m) {
        done = true;
        break;
      }
    }
    if (done)
      break;
  }

  std::vector<Edit> edits;
  long x = n;
  long y = m;
  for (long d = static_cast<long>(trace.size()) - 1; d >= 0; --d) {
    const auto &tv = trace[static_cast<std::size_t>(d)];
    const long k = x - y;
    long prev_k;
    if (k == -d || (k != d && tv[offset + k - 1] < tv[offset + k + 1]))
      prev_k = k + 1;
    else
      prev_k = k - 1;
    const long prev_x = tv[offset + prev_k];
    const long prev_y = prev_x - prev_k;
    while (x > prev_x && y > prev_y) {
      --x;
      --y;
      edits.push_back({Op::Keep, static_cast<std::size_t>(x), static_cast<std::size_t>(y)});
    }
    if (d > 0) {
      if (x == prev_x)
        edits.push_back({Op::Add, static_cast<std::size_t>(x), static_cast<std::size_t>(prev_y)});
      else
        edits.push_back({Op::Del, static_cast<std::size_t>(prev_x), static_cast<std::size_t>(y)});
    }
    x = prev_x;
    y = prev_y;
  }
  std::reverse(edits.begin(), edits.end());
  return edits;
}

void emit_line(std::string &out, char prefix, std::string_view line) {
  out += prefix;
  const auto body = text::chomp(line);
  out += body;
  out += '\n';
  if (body.size() == line.size())
    out += "\\ No newline at end of file\n";
}

std::string range(std::size_t start, std::size_t count) {
  if (count == 0)
    return std::to_string(start) + ",0";
  if (count == 1)
    return std::to_string(start + 1);
  return std::to_string(start + 1) + "," + std::to_string(count);
}

} // namespace

std::string unified_diff(std::string_view before, std::string_view after, const std::string &path, int context) {
  if (before == after)
    return {};
  const auto a = text::split_lines(before);
  const auto b = text::split_lines(after);
  const auto edits = shortest_edit(a, b);
  const auto ctx = static_cast<std::size_t>(std::max(context, 0));

  std::string out = "--- a/" + path + "\n+++ b/" + path + "\n";
  std::size_t i = 0;
  while (i < edits.size()) {
    if (edits[i].op == Op::Keep) {
      ++i;
      continue;
    }
    // Grow the hunk while changes are within 2*context lines of each other.
    std::size_t start = i >= ctx ? i - ctx : 0;
    while (start < i && edits[start].op != Op::Keep)
      ++start;
    std::size_t end = i;
    std::size_t last_change = i;
    while (end < edits.size()) {
      if (edits[end].op != Op::Keep)
        last_change = end;
      else if (end - last_change > 2 * ctx)
        break;
      ++end;
    }
    end = std::min(edits.size(), last_change + ctx + 1);

    std::size_t a_start = 0;
    std::size_t b_start = 0;
    std::size_t a_count = 0;
    std::size_t b_count = 0;
    bool a_set = false;
    bool b_set = false;
    for (std::size_t k = start; k < end; ++k) {
      const auto &e = edits[k];
      if (e.op != Op::Add) {
        if (!a_set) {
          a_start = e.a;
          a_set = true;
        }
        ++a_count;
      }
      if (e.op != Op::Del) {
        if (!b_set) {
          b_start = e.b;
          b_set = true;
        }
        ++b_count;
      }
    }
    if (!a_set)
      a_start = edits[start].a;
    if (!b_set)
      b_start = edits[start].b;

    out += "@@ -" + range(a_start, a_count) + " +" + range(b_start, b_count) + " @@\n";
    for (std::size_t k = start; k < end; ++k) {
      const auto &e = edits[k];
      if (e.op == Op::Keep)
        emit_line(out, ' ', a[e.a]);
      else if (e.op == Op::Del)
        emit_line(out, '-', a[e.a]);
      else
        emit_line(out, '+', b[e.b]);
    }
    i = end;
  }
  return out;
}

} // namespace pytrim
