#ifndef DIRBOUND_ERROR_HPP_
#define DIRBOUND_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace dirbound {

enum class ErrorCode {
  kParam,        // E_PARAM
  kConvergence,  // E_CONVERGENCE
  kSingular,     // E_SINGULAR
  kSymbol,       // E_SYMBOL
  kConfig,       // E_CONFIG
  kIo,           // E_IO
};

// Stable error name, as printed by the CLI and matched by tests.
constexpr std::string_view ErrorName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParam: return "E_PARAM";
    case ErrorCode::kConvergence: return "E_CONVERGENCE";
    case ErrorCode::kSingular: return "E_SINGULAR";
    case ErrorCode::kSymbol: return "E_SYMBOL";
    case ErrorCode::kConfig: return "E_CONFIG";
    case ErrorCode::kIo: return "E_IO";
  }
  return "E_UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return ErrorName(code_); }

 private:
  ErrorCode code_;
};

}  // namespace dirbound

#endif  // DIRBOUND_ERROR_HPP_
