#pragma once

// Exact row reduction over F_p for p < 256 on dense byte rows.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "iwahori_gr/error.hpp"

namespace iwahori_gr {

using FpRow = std::vector<std::uint8_t>;

inline std::uint8_t fp_inverse(std::uint32_t a, std::uint32_t p) {
  std::uint32_t result = 1, base = a % p;
  for (std::uint32_t e = p - 2; e > 0; e >>= 1) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
  }
  return static_cast<std::uint8_t>(result);
}

/// Incrementally built semi-echelon basis: every stored row is monic at its
/// pivot and vanishes at the pivots of the rows stored before it.
class FpEchelon {
 public:
  FpEchelon(std::int64_t p, std::size_t cols) : p_(static_cast<std::uint32_t>(p)), cols_(cols) {
    if (p < 2 || p > 255) throw Error(ErrorCode::BadIndex, "row reduction supports primes below 256");
  }

  std::size_t cols() const { return cols_; }
  std::size_t rank() const { return rows_.size(); }
  std::uint32_t p() const { return p_; }
  const std::vector<FpRow>& rows() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  /// Residue of `row` modulo the span of the first `limit` stored rows.
  FpRow reduce(FpRow row, std::size_t limit = SIZE_MAX) const {
    const std::size_t n = std::min(limit, rows_.size());
    for (std::size_t k = 0; k < n; ++k) {
      const std::uint32_t c = row[pivots_[k]];
      if (c == 0) continue;
      const std::uint32_t m = p_ - c;
      const FpRow& r = rows_[k];
      for (std::size_t j = pivots_[k]; j < cols_; ++j)
        if (r[j]) row[j] = static_cast<std::uint8_t>((row[j] + m * r[j]) % p_);
    }
    return row;
  }

  bool contains(const FpRow& row, std::size_t limit = SIZE_MAX) const { return is_zero(reduce(row, limit)); }

  /// Adds `row` to the span; returns false if it was already there.
  bool insert(const FpRow& row) {
    FpRow r = reduce(row);
    std::size_t pivot = 0;
    while (pivot < cols_ && r[pivot] == 0) ++pivot;
    if (pivot == cols_) return false;
    const std::uint32_t inv = fp_inverse(r[pivot], p_);
    for (std::size_t j = pivot; j < cols_; ++j)
      if (r[j]) r[j] = static_cast<std::uint8_t>(r[j] * inv % p_);
    rows_.push_back(std::move(r));
    pivots_.push_back(pivot);
    return true;
  }

  /// Is the span of `other` inside this span?
  bool contains_span(const FpEchelon& other) const {
    for (const auto& r : other.rows_)
      if (!contains(r)) return false;
    return true;
  }

  static bool is_zero(const FpRow& row) {
    for (auto v : row)
      if (v) return false;
    return true;
  }

 private:
  std::uint32_t p_;
  std::size_t cols_;
  std::vector<FpRow> rows_;
  std::vector<std::size_t> pivots_;
};

/// Basis of {c : r.c = 0 for every stored row r}.
inline std::vector<FpRow> fp_nullspace(const FpEchelon& e) {
  const std::uint32_t p = e.p();
  const std::size_t n = e.cols();
  std::vector<std::size_t> order(e.rank());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return e.pivots()[a] < e.pivots()[b]; });
  std::vector<FpRow> rref;
  std::vector<std::size_t> piv;
  for (auto k : order) {
    rref.push_back(e.rows()[k]);
    piv.push_back(e.pivots()[k]);
  }
  // Clear each pivot column everywhere else.
  for (std::size_t a = 0; a < rref.size(); ++a)
    for (std::size_t b = 0; b < rref.size(); ++b) {
      if (a == b) continue;
      const std::uint32_t c = rref[b][piv[a]];
      if (c == 0) continue;
      const std::uint32_t m = p - c;
      for (std::size_t j = 0; j < n; ++j)
        if (rref[a][j]) rref[b][j] = static_cast<std::uint8_t>((rref[b][j] + m * rref[a][j]) % p);
    }
  std::vector<bool> is_pivot(n, false);
  for (auto c : piv) is_pivot[c] = true;
  std::vector<FpRow> out;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    FpRow v(n, 0);
    v[free] = 1;
    for (std::size_t a = 0; a < rref.size(); ++a)
      if (rref[a][free]) v[piv[a]] = static_cast<std::uint8_t>(p - rref[a][free]);
    out.push_back(std::move(v));
  }
  return out;
}

/// Rank of a list of rows.
inline std::size_t fp_rank(std::int64_t p, std::size_t cols, const std::vector<FpRow>& rows) {
  FpEchelon e(p, cols);
  for (const auto& r : rows) e.insert(r);
  return e.rank();
}

}  // namespace iwahori_gr
