#pragma once

#include <Eigen/Dense>

#include <cstdint>

#include "symlap/grid.hpp"
#include "symlap/symtensor.hpp"

namespace symlap {

/// Symmetric p-tensor field: one compressed fiber per grid node.
/// values is (node_count x entries); column e is the scalar field of entry e.
struct SymTensorField {
  ChartGridPtr grid;
  SymIndexTablePtr table;
  Eigen::MatrixXd values;

  SymTensorField() = default;
  SymTensorField(ChartGridPtr g, SymIndexTablePtr t)
      : grid(std::move(g)), table(std::move(t)), values(Eigen::MatrixXd::Zero(grid->node_count(), table->size())) {}
  SymTensorField(ChartGridPtr g, int degree)
      : SymTensorField(g, sym_index_table(g->dimension(), degree)) {}

  int degree() const { return table->degree(); }
  int dimension() const { return table->dimension(); }
  int node_count() const { return static_cast<int>(values.rows()); }
  int entries() const { return static_cast<int>(values.cols()); }

  SymTensorPointd at(int node) const { return SymTensorPointd(table, values.row(node).transpose()); }
  void set(int node, const SymTensorPointd& phi) { values.row(node) = phi.values.transpose(); }

  SymTensorField& operator+=(const SymTensorField& o);
  SymTensorField& operator-=(const SymTensorField& o);
  SymTensorField& operator*=(double s) {
    values *= s;
    return *this;
  }
};

SymTensorField operator+(SymTensorField a, const SymTensorField& b);
SymTensorField operator-(SymTensorField a, const SymTensorField& b);
SymTensorField operator*(double s, SymTensorField a);

/// Field of rank-(1+p) covariant tensors: first slot free, trailing p slots symmetric.
/// values is (node_count x n*entries); column i*entries + e holds xi_{i; entry e}.
struct MixedTensorField {
  ChartGridPtr grid;
  SymIndexTablePtr table;
  Eigen::MatrixXd values;

  MixedTensorField() = default;
  MixedTensorField(ChartGridPtr g, SymIndexTablePtr t)
      : grid(std::move(g)),
        table(std::move(t)),
        values(Eigen::MatrixXd::Zero(grid->node_count(), static_cast<Eigen::Index>(table->dimension()) * table->size())) {}

  int degree() const { return table->degree(); }
  int dimension() const { return table->dimension(); }
  int column(int i, int e) const { return i * table->size() + e; }
};

/// Parameters of the band-limited random field generator.
struct RandomFieldSpec {
  int degree = 1;
  int modes = 4;
  int max_wavenumber = 2;
  double amplitude = 1.0;
  std::uint64_t seed = 1;
};

/// Largest wavenumber leaving a factor-3 headroom below the grid Nyquist number.
int max_band_limited_wavenumber(const ChartGrid& grid);

/// Every entry is an independent sum of `modes` random Fourier modes with
/// integer wave vectors |k_a| <= max_wavenumber.
SymTensorField random_field(ChartGridPtr grid, const RandomFieldSpec& spec);
MixedTensorField random_mixed_field(ChartGridPtr grid, const RandomFieldSpec& spec);

SymTensorField constant_field(ChartGridPtr grid, const SymTensorPointd& value);

/// Node-major flattening: index node * entries + e.
Eigen::VectorXd flatten(const SymTensorField& f);
SymTensorField unflatten(ChartGridPtr grid, SymIndexTablePtr table, const Eigen::Ref<const Eigen::VectorXd>& x);

}  // namespace symlap
