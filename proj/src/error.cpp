#include "diagent/error.hpp"

#include <atomic>
#include <iostream>

namespace diagent {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::QuadratureNonconvergence: return "quadrature-nonconvergence";
    case ErrorKind::TableTooSmall: return "table-too-small";
    case ErrorKind::InvalidSites: return "invalid-sites";
    case ErrorKind::BlockTooLarge: return "block-too-large";
    case ErrorKind::NegativeProbability: return "negative-probability";
    case ErrorKind::Unnormalized: return "unnormalized";
    case ErrorKind::SpectrumInvalid: return "spectrum-invalid";
    case ErrorKind::RankDeficient: return "rank-deficient";
    case ErrorKind::NoSignChange: return "no-sign-change";
    case ErrorKind::TooLarge: return "too-large";
    case ErrorKind::Io: return "io-failure";
  }
  return "unknown";
}

namespace {

void stderr_handler(std::string_view message) {
  std::cerr << "warning: " << message << '\n';
}

std::atomic<WarningHandler> g_handler{&stderr_handler};

}  // namespace

WarningHandler set_warning_handler(WarningHandler handler) {
  return g_handler.exchange(handler ? handler : &stderr_handler);
}

void warn(std::string_view message) { g_handler.load()(message); }

}  // namespace diagent
