#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace diagent {

enum class ErrorKind {
  InvalidArgument,
  QuadratureNonconvergence,
  TableTooSmall,
  InvalidSites,
  BlockTooLarge,
  NegativeProbability,
  Unnormalized,
  SpectrumInvalid,
  RankDeficient,
  NoSignChange,
  TooLarge,
  Io,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; `kind()` tells callers which
// contract failed, `index()` carries the offending table index or block size
// when one applies.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what,
        std::optional<int> index = std::nullopt)
      : std::runtime_error(what), kind_(kind), index_(index) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<int> index() const noexcept { return index_; }

 private:
  ErrorKind kind_;
  std::optional<int> index_;
};

// Receives non-fatal diagnostics (probability clamps, degenerate ground
// states). Defaults to stderr; tests swap it out.
using WarningHandler = void (*)(std::string_view);
WarningHandler set_warning_handler(WarningHandler handler);
void warn(std::string_view message);

}  // namespace diagent
