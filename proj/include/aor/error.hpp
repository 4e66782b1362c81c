#pragma once

#include <stdexcept>
#include <string>

namespace aor {

enum class ErrorKind {
  InvalidParameter,  // value outside its admissible range
  Undeliverable,     // no delivery path can ever succeed
  OutOfDomain,       // closed-form optimum not proven for these links
  Io,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace aor
