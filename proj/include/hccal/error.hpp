#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hccal {

enum class ErrorKind {
  io,
  corrupt_file,
  data,
  degenerate_feature,
  shape,
  config,
  hierarchy,
  degenerate_score,
  incomplete_verdict,
  refinement,
  divergence,
  geometry,
  undefined_correlation,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; `kind` lets callers (the CLI in
// particular) map failures onto exit codes and machine-readable reports.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hccal
