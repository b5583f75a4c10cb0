#include "symlap/fields.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace symlap {

namespace {

void check_compatible(const SymTensorField& a, const SymTensorField& b) {
  if (a.table->degree() != b.table->degree() || a.table->dimension() != b.table->dimension() ||
      a.values.rows() != b.values.rows())
    throw DegreeMismatchError("field arithmetic: degree, dimension or grid mismatch");
}

void check_band_limit(const ChartGrid& grid, const RandomFieldSpec& spec) {
  if (spec.max_wavenumber < 0 || spec.modes < 1)
    throw InvalidArgumentError("random field: need modes >= 1 and max_wavenumber >= 0");
  if (spec.max_wavenumber > max_band_limited_wavenumber(grid))
    throw InvalidArgumentError("random field: max_wavenumber " + std::to_string(spec.max_wavenumber) +
                               " exceeds the anti-aliasing limit " +
                               std::to_string(max_band_limited_wavenumber(grid)) + " of this grid");
}

void fill_random_columns(const ChartGrid& grid, const RandomFieldSpec& spec, Eigen::MatrixXd& values) {
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<int> wave(-spec.max_wavenumber, spec.max_wavenumber);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const int n = grid.dimension();
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<int> k(n);
  for (Eigen::Index c = 0; c < values.cols(); ++c) {
    for (int m = 0; m < spec.modes; ++m) {
      for (int a = 0; a < n; ++a) k[a] = wave(rng);
      const double ca = spec.amplitude * coef(rng);
      const double sa = spec.amplitude * coef(rng);
      for (int node = 0; node < grid.node_count(); ++node) {
        double theta = 0.0;
        for (int a = 0; a < n; ++a) theta += two_pi * k[a] * grid.coordinate(node, a) / grid.period(a);
        values(node, c) += ca * std::cos(theta) + sa * std::sin(theta);
      }
    }
  }
}

}  // namespace

SymTensorField& SymTensorField::operator+=(const SymTensorField& o) {
  check_compatible(*this, o);
  values += o.values;
  return *this;
}

SymTensorField& SymTensorField::operator-=(const SymTensorField& o) {
  check_compatible(*this, o);
  values -= o.values;
  return *this;
}

SymTensorField operator+(SymTensorField a, const SymTensorField& b) { return a += b; }
SymTensorField operator-(SymTensorField a, const SymTensorField& b) { return a -= b; }
SymTensorField operator*(double s, SymTensorField a) { return a *= s; }

int max_band_limited_wavenumber(const ChartGrid& grid) {
  int kmax = 1 << 30;
  for (int a = 0; a < grid.dimension(); ++a) kmax = std::min(kmax, grid.size(a) / 6);
  return kmax;
}

SymTensorField random_field(ChartGridPtr grid, const RandomFieldSpec& spec) {
  check_band_limit(*grid, spec);
  SymTensorField f(grid, spec.degree);
  fill_random_columns(*grid, spec, f.values);
  return f;
}

MixedTensorField random_mixed_field(ChartGridPtr grid, const RandomFieldSpec& spec) {
  check_band_limit(*grid, spec);
  MixedTensorField f(grid, sym_index_table(grid->dimension(), spec.degree));
  fill_random_columns(*grid, spec, f.values);
  return f;
}

SymTensorField constant_field(ChartGridPtr grid, const SymTensorPointd& value) {
  SymTensorField f(grid, value.table);
  f.values.rowwise() = value.values.transpose();
  return f;
}

Eigen::VectorXd flatten(const SymTensorField& f) {
  Eigen::MatrixXd t = f.values.transpose();
  return Eigen::Map<const Eigen::VectorXd>(t.data(), t.size());
}

SymTensorField unflatten(ChartGridPtr grid, SymIndexTablePtr table, const Eigen::Ref<const Eigen::VectorXd>& x) {
  SymTensorField f(std::move(grid), std::move(table));
  if (x.size() != f.values.size()) throw DegreeMismatchError("unflatten: vector length does not match field layout");
  Eigen::Map<const Eigen::MatrixXd> t(x.data(), f.entries(), f.node_count());
  f.values = t.transpose();
  return f;
}

}  // namespace symlap
