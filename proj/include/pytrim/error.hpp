#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pytrim {

enum class ErrorKind {
  EmptyName,
  InvalidName,
  MalformedRequirement,
  NotADirectory,
  TomlSyntaxError,
  IniSyntaxError,
  YamlSyntaxError,
  PySyntaxError,
  InstallerNotFound,
  MalformedMetadata,
  MultipleRoots,
  MissingRoot,
  StaleFile,
  IoError,
  NotARepo,
  DirtyWorktree,
  VcsCommandFailed,
  CaseSetupError,
  Usage,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers can
/// downgrade recoverable ones (syntax errors become manual-review flags).
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &message) {
  throw Error(kind, message);
}

} // namespace pytrim
