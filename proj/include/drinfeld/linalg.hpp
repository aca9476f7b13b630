#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "drinfeld/gf.hpp"

namespace drinfeld {

using Vec = std::vector<Fq>;
using Matrix = std::vector<Vec>;  // row-major

/// Reduced row echelon form in place; returns the pivot columns.
inline std::vector<std::size_t> row_reduce(const FiniteField& f, Matrix& a, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < a.size(); ++col) {
    std::size_t sel = row;
    while (sel < a.size() && a[sel][col] == 0) ++sel;
    if (sel == a.size()) continue;
    std::swap(a[sel], a[row]);
    const Fq inv = f.inv(a[row][col]);
    for (auto& x : a[row]) x = f.mul(x, inv);
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == row || a[r][col] == 0) continue;
      const Fq c = a[r][col];
      for (std::size_t j = col; j < cols; ++j) {
        if (a[row][j]) a[r][j] = f.sub(a[r][j], f.mul(c, a[row][j]));
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

/// Basis of {x : A x = 0} for an rows x cols matrix.
inline std::vector<Vec> kernel(const FiniteField& f, Matrix a, std::size_t cols) {
  for (auto& r : a) r.resize(cols, 0);
  auto pivots = row_reduce(f, a, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<Vec> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    Vec v(cols, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = f.neg(a[i][free]);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// One solution of A x = b, if any.
inline std::optional<Vec> solve(const FiniteField& f, const Matrix& a, const Vec& b, std::size_t cols) {
  Matrix aug = a;
  for (std::size_t i = 0; i < aug.size(); ++i) {
    aug[i].resize(cols, 0);
    aug[i].push_back(i < b.size() ? b[i] : 0);
  }
  auto pivots = row_reduce(f, aug, cols + 1);
  if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
  Vec x(cols, 0);
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug[i][cols];
  return x;
}

/// Span of a growing list of vectors; reports the first linear dependency.
class IncrementalSpan {
 public:
  IncrementalSpan(const FiniteField& f, std::size_t dim) : f_(f), dim_(dim) {}

  /// Adds v. If v lies in the span of the vectors added so far, returns c
  /// with v = sum c_i v_i and leaves the span unchanged.
  std::optional<Vec> add(Vec v) {
    v.resize(dim_, 0);
    Vec combo(count_ + 1, 0);
    combo[count_] = 1;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Fq c = v[pivots_[i]];
      if (c == 0) continue;
      for (std::size_t j = 0; j < dim_; ++j) {
        if (rows_[i][j]) v[j] = f_.sub(v[j], f_.mul(c, rows_[i][j]));
      }
      for (std::size_t j = 0; j < combos_[i].size(); ++j) {
        if (combos_[i][j]) combo[j] = f_.sub(combo[j], f_.mul(c, combos_[i][j]));
      }
    }
    std::size_t piv = 0;
    while (piv < dim_ && v[piv] == 0) ++piv;
    if (piv == dim_) {
      // combo . (v_0..v_count) = 0 with combo[count] = 1.
      Vec result(count_, 0);
      for (std::size_t j = 0; j < count_; ++j) result[j] = f_.neg(combo[j]);
      return result;
    }
    const Fq inv = f_.inv(v[piv]);
    for (auto& x : v) x = f_.mul(x, inv);
    for (auto& x : combo) x = f_.mul(x, inv);
    rows_.push_back(std::move(v));
    combos_.push_back(std::move(combo));
    pivots_.push_back(piv);
    ++count_;
    return std::nullopt;
  }

  std::size_t size() const { return count_; }

 private:
  const FiniteField& f_;
  std::size_t dim_;
  std::size_t count_ = 0;
  Matrix rows_;
  Matrix combos_;
  std::vector<std::size_t> pivots_;
};

}  // namespace drinfeld
