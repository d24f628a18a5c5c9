#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace clusterkit {

enum class ErrorCode {
  kInvalidParameter,
  kOutOfRange,
  kContractViolation,
  kSizeLimitExceeded,
  kDivergence,
  kUnreachableTarget,
  kUnsupportedOrder,
  kScope,
  kRejectionBudgetExhausted,
  kBudgetExceeded,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the library carries one of the codes above so
// callers (and the CLI) can branch on the category without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace clusterkit
