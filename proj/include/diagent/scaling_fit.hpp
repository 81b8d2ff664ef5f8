#pragma once

#include <span>
#include <vector>

namespace diagent {

struct FitRange {
  int L_min = 1;
  int L_max = 18;
};

// S(L) = a L + b log2(L) + c
struct ScalingFit {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double rms_residual = 0.0;
  FitRange fit_range;

  double predict(int L) const;
};

// Ordinary least squares over the points with L in range, solved by
// column-pivoted Householder QR. `sizes` and `values` are parallel arrays.
ScalingFit fit_scaling(std::span<const int> sizes,
                       std::span<const double> values, FitRange range);

struct Residual {
  int L;
  double value;
  double model;
  double residual;
};

// Per-L residuals over the fit's range.
std::vector<Residual> fit_report(const ScalingFit& fit,
                                 std::span<const int> sizes,
                                 std::span<const double> values);

// S(L) = slope log2(L) + offset, used for the entanglement entropy of
// critical chains.
struct LogFit {
  double slope = 0.0;
  double offset = 0.0;
  double rms_residual = 0.0;
  FitRange fit_range;
};

LogFit fit_log_scaling(std::span<const int> sizes,
                       std::span<const double> values, FitRange range);

}  // namespace diagent
