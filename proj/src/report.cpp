#include "symlap/report.hpp"

#include <algorithm>
#include <cmath>

#include "symlap/error.hpp"

namespace symlap {

ResidualReport make_report(std::string name, std::string tag, double lhs, double rhs, double residual,
                           double normalization, double tolerance) {
  ResidualReport r;
  r.name = std::move(name);
  r.tag = std::move(tag);
  r.lhs = lhs;
  r.rhs = rhs;
  r.residual = residual;
  r.normalization = normalization;
  r.relative = std::abs(residual) / std::max(normalization, 1e-300);
  r.tolerance = tolerance;
  r.pass = std::isfinite(r.relative) && r.relative < tolerance;
  return r;
}

ResidualReport worst_of(const std::vector<ResidualReport>& trials) {
  if (trials.empty()) throw InvalidArgumentError("worst_of: no trials");
  auto worst = std::max_element(trials.begin(), trials.end(), [](const auto& a, const auto& b) {
    if (!std::isfinite(b.relative)) return std::isfinite(a.relative);
    return a.relative < b.relative;
  });
  ResidualReport out = *worst;
  out.pass = std::all_of(trials.begin(), trials.end(), [](const auto& r) { return r.pass; });
  out.metric("trials", static_cast<double>(trials.size()));
  return out;
}

}  // namespace symlap
