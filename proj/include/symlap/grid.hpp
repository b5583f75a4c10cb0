#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace symlap {

/// Uniform periodic grid on the coordinate box [0, L_1) x ... x [0, L_n).
/// Node numbering runs with axis 0 fastest.
class ChartGrid {
 public:
  ChartGrid(std::vector<int> sizes, std::vector<double> periods);

  int dimension() const { return static_cast<int>(sizes_.size()); }
  int size(int axis) const { return sizes_[axis]; }
  double period(int axis) const { return periods_[axis]; }
  double spacing(int axis) const { return periods_[axis] / sizes_[axis]; }
  int stride(int axis) const { return strides_[axis]; }
  int node_count() const { return node_count_; }
  const std::vector<int>& sizes() const { return sizes_; }
  const std::vector<double>& periods() const { return periods_; }

  /// Trapezoidal weight, identical at every node.
  double weight() const { return weight_; }
  double volume() const { return volume_; }

  int axis_index(int node, int axis) const { return (node / strides_[axis]) % sizes_[axis]; }
  double coordinate(int node, int axis) const { return axis_index(node, axis) * spacing(axis); }
  Eigen::VectorXd point(int node) const;

  Eigen::VectorXd sample(const std::function<double(const Eigen::VectorXd&)>& f) const;

 private:
  std::vector<int> sizes_;
  std::vector<double> periods_;
  std::vector<int> strides_;
  int node_count_ = 1;
  double weight_ = 1.0;
  double volume_ = 1.0;
};

using ChartGridPtr = std::shared_ptr<const ChartGrid>;

enum class DerivativeScheme { Spectral, FD4 };

std::string to_string(DerivativeScheme scheme);
DerivativeScheme scheme_from_string(const std::string& name);

/// Partial derivatives along grid axes, applied line by line with a dense
/// per-axis differentiation matrix (Fourier collocation or 4th-order central).
class Differentiator {
 public:
  Differentiator(ChartGridPtr grid, DerivativeScheme scheme);

  DerivativeScheme scheme() const { return scheme_; }
  const ChartGrid& grid() const { return *grid_; }
  const Eigen::MatrixXd& matrix(int axis) const { return matrices_[axis]; }

  Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& f, int axis) const;
  /// Differentiates every column of F (one column per scalar component field).
  Eigen::MatrixXd apply_columns(const Eigen::Ref<const Eigen::MatrixXd>& F, int axis) const;

 private:
  ChartGridPtr grid_;
  DerivativeScheme scheme_;
  std::vector<Eigen::MatrixXd> matrices_;
};

/// Derivative of a sampled field along `axis` (0-based).
Eigen::VectorXd partial_derivative(const ChartGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& f, int axis,
                                   DerivativeScheme scheme);

/// Band-limited trigonometric interpolation of grid samples at arbitrary points.
class TrigInterpolator {
 public:
  explicit TrigInterpolator(ChartGridPtr grid) : grid_(std::move(grid)) {}

  /// Interpolation weights of every node for the point x (wrapped into the chart).
  Eigen::VectorXd node_weights(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// One interpolated value per column of F.
  Eigen::VectorXd evaluate(const Eigen::Ref<const Eigen::MatrixXd>& F, const Eigen::Ref<const Eigen::VectorXd>& x) const {
    return F.transpose() * node_weights(x);
  }

 private:
  ChartGridPtr grid_;
};

}  // namespace symlap
