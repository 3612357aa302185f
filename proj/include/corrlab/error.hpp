// Error categories shared by every corrlab module.
#pragma once

#include <stdexcept>
#include <string>

namespace corrlab {

enum class ErrorKind {
  precondition,  // caller supplied arguments outside the documented domain
  precision,     // certified error of an AlphaValue is too coarse for the request
  budget,        // scale / memory guard tripped
  parse,         // malformed text input (alpha specs, config files)
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::precision: return "precision";
    case ErrorKind::budget: return "budget";
    case ErrorKind::parse: return "parse";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::precondition, what);
}

inline void require_budget(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::budget, what);
}

}  // namespace corrlab
