#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace symlap {

/// One verified identity or property: both sides (when meaningful), the residual,
/// the denominator used to make it relative, and the verdict.
struct ResidualReport {
  std::string name;
  std::string tag;          // identity the check reports on
  double lhs = 0;
  double rhs = 0;
  double residual = 0;
  double normalization = 0;
  double relative = 0;
  double tolerance = 0;
  bool pass = false;
  bool applicable = true;   // false: hypotheses fail, verdict NOT-APPLICABLE
  std::string fingerprint;
  std::uint64_t seed = 0;
  std::string detail;
  std::vector<std::pair<std::string, double>> metrics;

  std::string verdict() const { return !applicable ? "NOT-APPLICABLE" : (pass ? "PASS" : "FAIL"); }
  ResidualReport& metric(std::string key, double value) {
    metrics.emplace_back(std::move(key), value);
    return *this;
  }
};

/// relative = |residual| / max(normalization, 1e-300); pass iff relative < tolerance.
ResidualReport make_report(std::string name, std::string tag, double lhs, double rhs, double residual,
                           double normalization, double tolerance);

/// Merges trial reports: keeps the worst relative residual, passes only if all pass.
ResidualReport worst_of(const std::vector<ResidualReport>& trials);

}  // namespace symlap
