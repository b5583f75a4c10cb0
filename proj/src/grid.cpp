#include "symlap/grid.hpp"

#include <cmath>
#include <numbers>

#include "symlap/error.hpp"

namespace symlap {

ChartGrid::ChartGrid(std::vector<int> sizes, std::vector<double> periods)
    : sizes_(std::move(sizes)), periods_(std::move(periods)) {
  if (sizes_.empty() || sizes_.size() != periods_.size())
    throw InvalidArgumentError("ChartGrid: sizes and periods must be non-empty and of equal length");
  strides_.resize(sizes_.size());
  for (std::size_t a = 0; a < sizes_.size(); ++a) {
    if (sizes_[a] < 8 || sizes_[a] % 2 != 0)
      throw InvalidArgumentError("ChartGrid: every axis needs an even node count >= 8");
    if (!(periods_[a] > 0.0)) throw InvalidArgumentError("ChartGrid: periods must be positive");
    strides_[a] = node_count_;
    node_count_ *= sizes_[a];
    volume_ *= periods_[a];
  }
  weight_ = volume_ / node_count_;
}

Eigen::VectorXd ChartGrid::point(int node) const {
  Eigen::VectorXd x(dimension());
  for (int a = 0; a < dimension(); ++a) x[a] = coordinate(node, a);
  return x;
}

Eigen::VectorXd ChartGrid::sample(const std::function<double(const Eigen::VectorXd&)>& f) const {
  Eigen::VectorXd out(node_count_);
  for (int i = 0; i < node_count_; ++i) out[i] = f(point(i));
  return out;
}

std::string to_string(DerivativeScheme scheme) { return scheme == DerivativeScheme::Spectral ? "spectral" : "fd4"; }

DerivativeScheme scheme_from_string(const std::string& name) {
  if (name == "spectral") return DerivativeScheme::Spectral;
  if (name == "fd4") return DerivativeScheme::FD4;
  throw InvalidArgumentError("unknown derivative scheme '" + name + "' (expected spectral or fd4)");
}

namespace {

Eigen::MatrixXd spectral_matrix(int N, double L) {
  // Fourier collocation derivative for even N; the Nyquist mode is annihilated.
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(N, N);
  const double pi = std::numbers::pi;
  for (int j = 0; j < N; ++j)
    for (int l = 0; l < N; ++l) {
      if (j == l) continue;
      const int d = j - l;
      const double sign = (d % 2 == 0) ? 1.0 : -1.0;
      D(j, l) = (pi / L) * sign / std::tan(pi * d / N);
    }
  return D;
}

Eigen::MatrixXd fd4_matrix(int N, double L) {
  const double h = L / N;
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(N, N);
  for (int j = 0; j < N; ++j) {
    D(j, (j + 1) % N) += 8.0 / (12.0 * h);
    D(j, (j + N - 1) % N) -= 8.0 / (12.0 * h);
    D(j, (j + 2) % N) -= 1.0 / (12.0 * h);
    D(j, (j + N - 2) % N) += 1.0 / (12.0 * h);
  }
  return D;
}

}  // namespace

Differentiator::Differentiator(ChartGridPtr grid, DerivativeScheme scheme) : grid_(std::move(grid)), scheme_(scheme) {
  for (int a = 0; a < grid_->dimension(); ++a)
    matrices_.push_back(scheme == DerivativeScheme::Spectral ? spectral_matrix(grid_->size(a), grid_->period(a))
                                                             : fd4_matrix(grid_->size(a), grid_->period(a)));
}

Eigen::VectorXd Differentiator::apply(const Eigen::Ref<const Eigen::VectorXd>& f, int axis) const {
  const int s = grid_->stride(axis);
  const int N = grid_->size(axis);
  const int outer = grid_->node_count() / (s * N);
  const Eigen::MatrixXd& D = matrices_[axis];
  Eigen::VectorXd out(f.size());
  for (int o = 0; o < outer; ++o) {
    Eigen::Map<const Eigen::MatrixXd> in(f.data() + static_cast<Eigen::Index>(o) * s * N, s, N);
    Eigen::Map<Eigen::MatrixXd> res(out.data() + static_cast<Eigen::Index>(o) * s * N, s, N);
    res.noalias() = in * D.transpose();
  }
  return out;
}

Eigen::MatrixXd Differentiator::apply_columns(const Eigen::Ref<const Eigen::MatrixXd>& F, int axis) const {
  Eigen::MatrixXd out(F.rows(), F.cols());
  for (Eigen::Index c = 0; c < F.cols(); ++c) out.col(c) = apply(F.col(c), axis);
  return out;
}

Eigen::VectorXd partial_derivative(const ChartGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& f, int axis,
                                   DerivativeScheme scheme) {
  Differentiator d(std::make_shared<const ChartGrid>(grid), scheme);
  return d.apply(f, axis);
}

Eigen::VectorXd TrigInterpolator::node_weights(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const ChartGrid& g = *grid_;
  const double pi = std::numbers::pi;
  std::vector<Eigen::VectorXd> axis_w(g.dimension());
  for (int a = 0; a < g.dimension(); ++a) {
    const int N = g.size(a);
    const double L = g.period(a);
    double xa = std::fmod(x[a], L);
    if (xa < 0) xa += L;
    Eigen::VectorXd w(N);
    for (int j = 0; j < N; ++j) {
      // periodic cardinal function for even N: sin(N t/2) / (N tan(t/2)), t = 2 pi (x - x_j) / L
      const double t = 2.0 * pi * (xa - j * L / N) / L;
      const double half = 0.5 * t;
      if (std::abs(std::sin(half)) < 1e-15)
        w[j] = 1.0;
      else
        w[j] = std::sin(0.5 * N * t) / (N * std::tan(half));
    }
    axis_w[a] = std::move(w);
  }
  Eigen::VectorXd out(g.node_count());
  for (int node = 0; node < g.node_count(); ++node) {
    double w = 1.0;
    for (int a = 0; a < g.dimension(); ++a) w *= axis_w[a][g.axis_index(node, a)];
    out[node] = w;
  }
  return out;
}

}  // namespace symlap
