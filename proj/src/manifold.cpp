#include "symlap/manifold.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace symlap {

namespace {

std::string describe_grid(const std::vector<int>& sizes, const std::vector<double>& periods, DerivativeScheme scheme) {
  std::ostringstream os;
  os << "n=" << sizes.size() << " N=";
  for (std::size_t a = 0; a < sizes.size(); ++a) os << (a ? "x" : "") << sizes[a];
  os << " L=";
  for (std::size_t a = 0; a < periods.size(); ++a) os << (a ? "x" : "") << periods[a];
  os << " scheme=" << to_string(scheme);
  return os.str();
}

}  // namespace

DiscreteManifold::DiscreteManifold(ChartGridPtr grid, const MetricField::MetricFunction& g, DerivativeScheme scheme,
                                   std::string label)
    : grid_(std::move(grid)),
      diff_(grid_, scheme),
      metric_(grid_, g),
      curvature_(riemann(metric_, diff_, christoffel(metric_, diff_))),
      label_(std::move(label)) {}

DiscreteManifold DiscreteManifold::flat_torus(std::vector<int> sizes, std::vector<double> periods,
                                              DerivativeScheme scheme) {
  auto grid = std::make_shared<const ChartGrid>(sizes, periods);
  const int n = grid->dimension();
  return DiscreteManifold(
      grid, [n](const Eigen::VectorXd&) { return Eigen::MatrixXd::Identity(n, n); }, scheme,
      "flat_torus " + describe_grid(sizes, periods, scheme));
}

DiscreteManifold DiscreteManifold::conformal_torus(std::vector<int> sizes, std::vector<double> periods,
                                                   double amplitude, std::vector<int> wave_vector,
                                                   DerivativeScheme scheme) {
  auto grid = std::make_shared<const ChartGrid>(sizes, periods);
  const int n = grid->dimension();
  if (static_cast<int>(wave_vector.size()) != n)
    throw InvalidArgumentError("conformal_torus: wave vector length must equal the dimension");
  auto metric = [n, amplitude, wave_vector, periods](const Eigen::VectorXd& x) {
    double phase = 0.0;
    for (int a = 0; a < n; ++a) phase += wave_vector[a] * x[a] / periods[a];
    const double f = amplitude * std::sin(2.0 * std::numbers::pi * phase);
    return Eigen::MatrixXd(std::exp(2.0 * f) * Eigen::MatrixXd::Identity(n, n));
  };
  std::ostringstream os;
  os << "conformal_torus " << describe_grid(sizes, periods, scheme) << " a=" << amplitude << " w=";
  for (int a = 0; a < n; ++a) os << (a ? "," : "") << wave_vector[a];
  return DiscreteManifold(grid, metric, scheme, os.str());
}

SymTensorField DiscreteManifold::metric_tensor() const {
  SymTensorField g(grid_, 2);
  for (int node = 0; node < grid_->node_count(); ++node) g.set(node, metric_point(metric_.at(node)));
  return g;
}

GeodesicPath DiscreteManifold::integrate_geodesic(const Eigen::VectorXd& x0, const Eigen::VectorXd& v0, double h,
                                                  int steps) const {
  return GeodesicIntegrator(metric_, curvature_).integrate(x0, v0, h, steps);
}

}  // namespace symlap
