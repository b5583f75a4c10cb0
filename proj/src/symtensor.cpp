#include "symlap/symtensor.hpp"

#include <map>
#include <mutex>
#include <string>

namespace symlap {

std::int64_t sym_index_count(int n, int p) {
  if (n < 1 || p < 0) throw InvalidArgumentError("sym_index_count: need n >= 1 and p >= 0");
  // binomial(n + p - 1, p), exact in integers
  std::int64_t c = 1;
  for (int k = 1; k <= p; ++k) c = c * (n - 1 + k) / k;
  return c;
}

SymIndexTable::SymIndexTable(int n, int p) : n_(n), p_(p) {
  if (n < 1 || p < 0) throw InvalidArgumentError("SymIndexTable: need n >= 1 and p >= 0");
  raw_size_ = 1;
  for (int i = 0; i < p; ++i) raw_size_ *= n;

  // sorted multi-indices in lexicographic order
  std::vector<int> idx(p, 0);
  std::map<std::vector<int>, int> lookup;
  while (true) {
    lookup.emplace(idx, static_cast<int>(multiplicity_.size()));
    entries_.insert(entries_.end(), idx.begin(), idx.end());
    std::int64_t mult = 1;
    for (int k = 1; k <= p; ++k) mult *= k;
    for (int v = 0, k = 0; v < n; ++v) {
      int count = 0;
      while (k < p && idx[k] == v) ++count, ++k;
      for (int f = 2; f <= count; ++f) mult /= f;
    }
    multiplicity_.push_back(mult);

    int pos = p - 1;
    while (pos >= 0 && idx[pos] == n - 1) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int k = pos + 1; k < p; ++k) idx[k] = idx[pos];
  }

  raw_to_entry_.resize(raw_size_);
  entry_to_raw_.assign(size(), -1);
  std::vector<int> raw(p);
  for (int r = 0; r < raw_size_; ++r) {
    int rem = r;
    for (int k = p - 1; k >= 0; --k) {
      raw[k] = rem % n;
      rem /= n;
    }
    std::vector<int> sorted = raw;
    std::sort(sorted.begin(), sorted.end());
    const int e = lookup.at(sorted);
    raw_to_entry_[r] = e;
    if (entry_to_raw_[e] < 0) entry_to_raw_[e] = r;
  }

  replace_.resize(static_cast<std::size_t>(size()) * p * n);
  for (int e = 0; e < size(); ++e) {
    for (int k = 0; k < p; ++k)
      for (int m = 0; m < n; ++m) {
        std::vector<int> v(entry(e).begin(), entry(e).end());
        v[k] = m;
        std::sort(v.begin(), v.end());
        replace_[(static_cast<std::size_t>(e) * p + k) * n + m] = lookup.at(v);
      }
  }
}

int SymIndexTable::index_of(std::span<const int> indices) const {
  if (static_cast<int>(indices.size()) != p_)
    throw DegreeMismatchError("index_of: expected " + std::to_string(p_) + " indices");
  int r = 0;
  for (int i : indices) {
    if (i < 0 || i >= n_) throw InvalidArgumentError("index_of: index out of range");
    r = r * n_ + i;
  }
  return raw_to_entry_[r];
}

SymIndexTablePtr sym_index_table(int n, int p) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, SymIndexTablePtr> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{n, p}];
  if (!slot) slot = std::make_shared<const SymIndexTable>(n, p);
  return slot;
}

Eigen::MatrixXd fiber_gram(const SymIndexTable& table, const Eigen::MatrixXd& ginv) {
  const int E = table.size();
  auto tp = sym_index_table(table.dimension(), table.degree());
  Eigen::MatrixXd G(E, E);
  for (int a = 0; a < E; ++a) {
    SymTensorPointd ea(tp);
    ea.values[a] = 1.0;
    const auto up = transform_all(ea, ginv);
    for (int b = 0; b < E; ++b) G(b, a) = double(table.multiplicity(b)) * up.values[b];
  }
  return 0.5 * (G + G.transpose());
}

}  // namespace symlap
