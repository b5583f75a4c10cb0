#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <numeric>
#include <span>
#include <vector>

#include "symlap/error.hpp"

namespace symlap {

/// Determinants below this are treated as a degenerate metric.
inline constexpr double kDegenerateMetricThreshold = 1e-12;

/// binomial(n + p - 1, p): the fiber dimension of S^p over an n-dimensional space.
std::int64_t sym_index_count(int n, int p);

/// Sorted multi-indices (i_1 <= ... <= i_p) over {0, ..., n-1} with their multinomial
/// multiplicities. Raw (dense) tuples are addressed row-major: the first slot is the
/// most significant digit in base n.
class SymIndexTable {
 public:
  SymIndexTable(int n, int p);

  int dimension() const { return n_; }
  int degree() const { return p_; }
  int size() const { return static_cast<int>(multiplicity_.size()); }
  int raw_size() const { return raw_size_; }

  std::span<const int> entry(int e) const {
    return {entries_.data() + static_cast<std::size_t>(e) * p_, static_cast<std::size_t>(p_)};
  }
  std::int64_t multiplicity(int e) const { return multiplicity_[e]; }

  /// Entry holding the multi-index given in any slot order.
  int index_of(std::span<const int> indices) const;
  int index_of(std::initializer_list<int> indices) const {
    return index_of(std::span<const int>(indices.begin(), indices.size()));
  }

  int entry_of_raw(int raw) const { return raw_to_entry_[raw]; }
  int raw_of_entry(int e) const { return entry_to_raw_[e]; }

  /// Entry obtained from entry e by overwriting slot `slot` with `value`.
  int replaced(int e, int slot, int value) const {
    return replace_[(static_cast<std::size_t>(e) * p_ + slot) * n_ + value];
  }

 private:
  int n_;
  int p_;
  int raw_size_;
  std::vector<int> entries_;
  std::vector<std::int64_t> multiplicity_;
  std::vector<int> raw_to_entry_;
  std::vector<int> entry_to_raw_;
  std::vector<int> replace_;
};

using SymIndexTablePtr = std::shared_ptr<const SymIndexTable>;

/// Shared, cached table for (n, p). Safe to call from several threads.
SymIndexTablePtr sym_index_table(int n, int p);

/// A covariant symmetric tensor at one point, one value per compressed entry.
template <typename Scalar>
struct SymTensorPoint {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  SymIndexTablePtr table;
  Vector values;

  SymTensorPoint() = default;
  explicit SymTensorPoint(SymIndexTablePtr t) : table(std::move(t)), values(Vector::Zero(table->size())) {}
  SymTensorPoint(SymIndexTablePtr t, Vector v) : table(std::move(t)), values(std::move(v)) {}

  int dimension() const { return table->dimension(); }
  int degree() const { return table->degree(); }

  Scalar operator()(std::initializer_list<int> indices) const { return values[table->index_of(indices)]; }
  Scalar& operator()(std::initializer_list<int> indices) { return values[table->index_of(indices)]; }
  Scalar at(std::span<const int> indices) const { return values[table->index_of(indices)]; }
};

using SymTensorPointd = SymTensorPoint<double>;

/// A general rank-q covariant tensor at a point, n^q raw components.
template <typename Scalar>
struct DenseTensor {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  int n = 0;
  int rank = 0;
  Vector values;

  DenseTensor() = default;
  DenseTensor(int n_, int rank_) : n(n_), rank(rank_), values(Vector::Zero(raw_count(n_, rank_))) {}

  static Eigen::Index raw_count(int n, int rank) {
    Eigen::Index c = 1;
    for (int i = 0; i < rank; ++i) c *= n;
    return c;
  }

  Scalar& operator()(std::initializer_list<int> idx) { return values[flat(idx)]; }
  Scalar operator()(std::initializer_list<int> idx) const { return values[flat(idx)]; }

 private:
  Eigen::Index flat(std::initializer_list<int> idx) const {
    Eigen::Index r = 0;
    for (int i : idx) r = r * n + i;
    return r;
  }
};

// ---------------------------------------------------------------------------
// Pointwise algebra

template <typename Scalar>
DenseTensor<Scalar> to_dense(const SymTensorPoint<Scalar>& phi) {
  const auto& t = *phi.table;
  DenseTensor<Scalar> out(t.dimension(), t.degree());
  for (int r = 0; r < t.raw_size(); ++r) out.values[r] = phi.values[t.entry_of_raw(r)];
  return out;
}

/// Reads the sorted-index representatives; the caller guarantees T is symmetric.
template <typename Scalar>
SymTensorPoint<Scalar> from_dense(const DenseTensor<Scalar>& T) {
  SymTensorPoint<Scalar> out(sym_index_table(T.n, T.rank));
  for (int e = 0; e < out.table->size(); ++e) out.values[e] = T.values[out.table->raw_of_entry(e)];
  return out;
}

/// T'_{i_1..i_q} = A_{i_1 j_1} ... A_{i_q j_q} T_{j_1..j_q}.
template <typename Scalar, typename Derived>
DenseTensor<Scalar> transform_slots(DenseTensor<Scalar> T, const Eigen::MatrixBase<Derived>& A) {
  const int n = T.n;
  typename DenseTensor<Scalar>::Vector next(T.values.size());
  Eigen::Index post = T.values.size();
  for (int s = 0; s < T.rank; ++s) {
    post /= n;
    const Eigen::Index pre = T.values.size() / (post * n);
    for (Eigen::Index a = 0; a < pre; ++a)
      for (int i = 0; i < n; ++i)
        for (Eigen::Index b = 0; b < post; ++b) {
          Scalar acc(0);
          for (int j = 0; j < n; ++j) acc += A(i, j) * T.values[(a * n + j) * post + b];
          next[(a * n + i) * post + b] = acc;
        }
    std::swap(T.values, next);
  }
  return T;
}

/// Symmetrizes a rank-q tensor. Unnormalized: (1/(q-1)!) times the sum over all slot
/// permutations, which for T symmetric in its trailing q-1 slots is the sum of the q
/// terms obtained by moving each slot to the front. Normalized divides that by q.
template <typename Scalar>
SymTensorPoint<Scalar> symmetrize(const DenseTensor<Scalar>& T, bool normalized, SymIndexTablePtr table = nullptr) {
  if (T.rank < 1) throw DegreeMismatchError("symmetrize: tensor rank must be >= 1");
  if (!table) table = sym_index_table(T.n, T.rank);
  if (table->degree() != T.rank || table->dimension() != T.n)
    throw DegreeMismatchError("symmetrize: index table does not match tensor shape");
  const int q = T.rank;
  std::vector<int> perm(q);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> perms;
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));

  double fact = 1.0;
  for (int i = 2; i < q; ++i) fact *= i;
  const double scale = normalized ? 1.0 / (fact * q) : 1.0 / fact;

  SymTensorPoint<Scalar> out(table);
  for (int e = 0; e < table->size(); ++e) {
    const auto idx = table->entry(e);
    Scalar acc(0);
    for (const auto& pm : perms) {
      Eigen::Index r = 0;
      for (int s = 0; s < q; ++s) r = r * T.n + idx[pm[s]];
      acc += T.values[r];
    }
    out.values[e] = acc * Scalar(scale);
  }
  return out;
}

template <typename Scalar, typename Derived>
SymTensorPoint<Scalar> transform_all(const SymTensorPoint<Scalar>& phi, const Eigen::MatrixBase<Derived>& A) {
  if (phi.degree() == 0) return phi;
  return SymTensorPoint<Scalar>(phi.table, from_dense(transform_slots(to_dense(phi), A)).values);
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> checked_inverse(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& g) {
  using std::abs;
  if (abs(g.determinant()) < Scalar(kDegenerateMetricThreshold))
    throw DegenerateMetricError("metric determinant below degeneracy threshold");
  return g.inverse();
}

/// Contravariant components phi^{j_1..j_p} = g^{i_1 j_1} ... g^{i_p j_p} phi_{i_1..i_p}.
template <typename Scalar>
SymTensorPoint<Scalar> raise_all(const SymTensorPoint<Scalar>& phi,
                                 const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& g) {
  return transform_all(phi, checked_inverse(g));
}

template <typename Scalar>
SymTensorPoint<Scalar> lower_all(const SymTensorPoint<Scalar>& phi,
                                 const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& g) {
  return transform_all(phi, g);
}

/// Sum over all n^p raw tuples of phi^{i..} psi_{i..}, given the inverse metric.
template <typename Scalar, typename Derived>
Scalar full_contract_inv(const SymTensorPoint<Scalar>& phi, const SymTensorPoint<Scalar>& psi,
                         const Eigen::MatrixBase<Derived>& ginv) {
  if (phi.degree() != psi.degree() || phi.dimension() != psi.dimension())
    throw DegreeMismatchError("full_contract: degree or dimension mismatch");
  const auto up = transform_all(phi, ginv);
  Scalar acc(0);
  for (int e = 0; e < phi.table->size(); ++e)
    acc += Scalar(double(phi.table->multiplicity(e))) * up.values[e] * psi.values[e];
  return acc;
}

template <typename Scalar>
Scalar full_contract(const SymTensorPoint<Scalar>& phi, const SymTensorPoint<Scalar>& psi,
                     const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& g) {
  return full_contract_inv(phi, psi, checked_inverse(g));
}

/// Derivation action of a matrix on every slot:
/// (A . phi)_{J} = sum_k sum_m A(J_k, m) phi_{J with slot k replaced by m}.
template <typename Scalar, typename Derived>
SymTensorPoint<Scalar> derivation(const SymTensorPoint<Scalar>& phi, const Eigen::MatrixBase<Derived>& A) {
  const auto& t = *phi.table;
  SymTensorPoint<Scalar> out(phi.table);
  for (int e = 0; e < t.size(); ++e) {
    const auto idx = t.entry(e);
    Scalar acc(0);
    for (int k = 0; k < t.degree(); ++k)
      for (int m = 0; m < t.dimension(); ++m) acc += A(idx[k], m) * phi.values[t.replaced(e, k, m)];
    out.values[e] = acc;
  }
  return out;
}

/// The metric itself as a degree-2 symmetric tensor.
template <typename Scalar>
SymTensorPoint<Scalar> metric_point(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& g) {
  const int n = static_cast<int>(g.rows());
  SymTensorPoint<Scalar> out(sym_index_table(n, 2));
  for (int e = 0; e < out.table->size(); ++e) {
    const auto idx = out.table->entry(e);
    out.values[e] = g(idx[0], idx[1]);
  }
  return out;
}

/// Gram matrix of the compressed basis under the fiber inner product induced by g^{-1}.
Eigen::MatrixXd fiber_gram(const SymIndexTable& table, const Eigen::MatrixXd& ginv);

}  // namespace symlap
