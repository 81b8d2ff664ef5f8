#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "diagent/entropy.hpp"
#include "diagent/gaussian_measure.hpp"
#include "diagent/model_kernel.hpp"
#include "diagent/phase_scan.hpp"
#include "diagent/scaling_fit.hpp"

namespace diagent::io {

// Locale-independent %.17g; "nan"/"inf" for non-finite values.
std::string format_double(double value);

// Header row plus rows, '\n' line endings.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& row(std::vector<std::string> cells);
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Writes to a sibling temporary and renames over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

// Site 1 first; '1' marks s = -1.
std::string bitstring(std::uint32_t s, int L);

std::string gtable_csv(const CorrelationTable& table);
std::string probs_csv(const DiagonalDistribution& dist);
std::string entropy_csv(const EntropyCurve& curve);
std::string fit_csv(double gamma, double lambda, const ScalingFit& fit);
std::string fit_structured(double gamma, double lambda, const ScalingFit& fit);
std::string sweep_csv(const SweepResult& result);
std::string grid_csv(std::span<const SweepResult> results);
std::string boundary_csv(std::span<const BoundaryPoint> points);

// Entropy data as dots with the fitted law as a line.
std::string entropy_svg(const EntropyCurve& curve, const ScalingFit& fit);
// a, b, c against lambda (left) and their derivatives (right), one line per
// sweep.
std::string sweep_svg(std::span<const SweepResult> results);
// Boundary locus as dots over the circle gamma^2 + lambda^2 = 1.
std::string boundary_svg(std::span<const BoundaryPoint> points);

}  // namespace diagent::io
