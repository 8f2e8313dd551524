#pragma once

#include <stdexcept>
#include <string>

namespace fomcell {

enum class ErrorCode {
  invalid_argument,
  domain,      // argument outside the mathematical domain
  range,       // lookup outside a tabulated range
  non_finite,  // overflow or NaN during evaluation
  io,
  parse,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace fomcell
