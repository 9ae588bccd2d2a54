#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace handann {

enum class ErrorKind {
  InvalidInput,
  DegenerateGeometry,
  MalformedFrame,
  FrameMismatch,
  RankDeficient,
  NotConverged,
  OutOfDomain,
  BehindCamera,
  NoPairs,
  Unsorted,
  FileNotFound,
  Parse,
  Usage,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so the CLI can print a
// machine-parsable error line.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace handann
