#pragma once

#include <memory>
#include <string>
#include <vector>

#include "symlap/geometry.hpp"

namespace symlap {

/// A closed manifold covered by one periodic chart: grid, derivative scheme,
/// metric and its curvature, computed once on construction.
class DiscreteManifold {
 public:
  DiscreteManifold(ChartGridPtr grid, const MetricField::MetricFunction& g, DerivativeScheme scheme,
                   std::string label);

  static DiscreteManifold flat_torus(std::vector<int> sizes, std::vector<double> periods,
                                     DerivativeScheme scheme = DerivativeScheme::Spectral);

  /// g = exp(2 a sin(2 pi sum_i w_i x^i / L_i)) delta.
  static DiscreteManifold conformal_torus(std::vector<int> sizes, std::vector<double> periods, double amplitude,
                                          std::vector<int> wave_vector,
                                          DerivativeScheme scheme = DerivativeScheme::Spectral);

  int dimension() const { return grid_->dimension(); }
  const ChartGrid& grid() const { return *grid_; }
  const ChartGridPtr& grid_ptr() const { return grid_; }
  const Differentiator& diff() const { return diff_; }
  const MetricField& metric() const { return metric_; }
  const CurvatureData& curvature() const { return curvature_; }
  const std::string& label() const { return label_; }

  /// The metric as a degree-2 symmetric tensor field.
  SymTensorField metric_tensor() const;

  GeodesicPath integrate_geodesic(const Eigen::VectorXd& x0, const Eigen::VectorXd& v0, double h, int steps) const;

 private:
  ChartGridPtr grid_;
  Differentiator diff_;
  MetricField metric_;
  CurvatureData curvature_;
  std::string label_;
};

}  // namespace symlap
