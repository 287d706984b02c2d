#pragma once

#include <filesystem>
#include <set>
#include <string>

namespace pytrim {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
  explicit TempDir(const std::string &prefix = "pytrim");
  ~TempDir();
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const { return path_; }

private:
  std::filesystem::path path_;
};

/// Recursive copy of regular files; directories named in `skip` are left out.
void copy_tree(const std::filesystem::path &from, const std::filesystem::path &to,
               const std::set<std::string> &skip = {});

} // namespace pytrim
