#include "pytrim/fsutil.hpp"

#include "pytrim/error.hpp"

#include <cstdlib>
#include <unistd.h>

namespace pytrim {

namespace fs = std::filesystem;

TempDir::TempDir(const std::string &prefix) {
  auto pattern = (fs::temp_directory_path() / (prefix + "-XXXXXX")).string();
  if (!::mkdtemp(pattern.data()))
    fail(ErrorKind::IoError, "cannot create a temporary directory");
  path_ = pattern;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void copy_tree(const fs::path &from, const fs::path &to, const std::set<std::string> &skip) {
  fs::create_directories(to);
  std::error_code ec;
  for (auto it = fs::recursive_directory_iterator(from, fs::directory_options::skip_permission_denied, ec);
       it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec)
      fail(ErrorKind::IoError, "cannot walk " + from.string() + ": " + ec.message());
    const auto rel = fs::relative(it->path(), from);
    if (it->is_directory(ec)) {
      if (skip.count(it->path().filename().string())) {
        it.disable_recursion_pending();
        continue;
      }
      fs::create_directories(to / rel, ec);
    } else if (it->is_regular_file(ec)) {
      fs::copy_file(it->path(), to / rel, fs::copy_options::overwrite_existing, ec);
      if (ec)
        fail(ErrorKind::IoError, "cannot copy " + it->path().string() + ": " + ec.message());
    }
  }
}

} // namespace pytrim
