#pragma once

#include <stdexcept>
#include <string>

namespace ka {

enum class ErrorCode {
  invalid_argument = 1,
  parse = 2,
  precondition = 3,
  numeric = 4,
  mode = 5,
  io = 6,
  internal = 99
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

inline void require(bool cond, ErrorCode code, const std::string& msg) {
  if (!cond) throw Error(code, msg);
}

}  // namespace ka
