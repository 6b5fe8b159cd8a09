#pragma once

// Irreducible reduced root systems in the simple-root basis (Bourbaki numbering).

#include <algorithm>
#include <cstdint>
#include <cctype>
#include <cstdlib>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iwahori_gr/error.hpp"
#include "iwahori_gr/padic_ring.hpp"

namespace iwahori_gr {

using RootVec = std::vector<int>;
using IntMatrix = std::vector<std::vector<std::int64_t>>;

inline std::int64_t bareiss_determinant(IntMatrix m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  std::int64_t sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && m[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(m[k], m[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

/// Cartan matrix with entry (i, j) = <alpha_i, alpha_j^vee>.
inline IntMatrix cartan_matrix(char type, int n) {
  auto bad = [&] { return Error(ErrorCode::UnsupportedType, std::string(1, type) + std::to_string(n)); };
  const bool ok = (type == 'A' && n >= 1) || (type == 'B' && n >= 2) || (type == 'C' && n >= 2) ||
                  (type == 'D' && n >= 4) || (type == 'E' && n >= 6 && n <= 8) || (type == 'F' && n == 4) ||
                  (type == 'G' && n == 2);
  if (!ok) throw bad();
  IntMatrix c(n, std::vector<std::int64_t>(n, 0));
  for (int i = 0; i < n; ++i) c[i][i] = 2;
  auto link = [&](int i, int j) { c[i][j] = c[j][i] = -1; };
  switch (type) {
    case 'A':
    case 'B':
    case 'C':
    case 'F':
      for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
      break;
    case 'D':
      for (int i = 0; i + 2 < n; ++i) link(i, i + 1);
      link(n - 3, n - 1);
      break;
    case 'E':
      link(0, 2);
      link(1, 3);
      link(2, 3);
      for (int i = 3; i + 1 < n; ++i) link(i, i + 1);
      break;
    case 'G':
      link(0, 1);
      break;
    default:
      throw bad();
  }
  if (type == 'B') c[n - 2][n - 1] = -2;
  if (type == 'C') c[n - 1][n - 2] = -2;
  if (type == 'F') c[1][2] = -2;
  if (type == 'G') c[1][0] = -3;
  return c;
}

inline std::pair<char, int> parse_type_label(const std::string& label) {
  if (label.size() < 2) throw Error(ErrorCode::UnsupportedType, "type label '" + label + "'");
  const char t = static_cast<char>(std::toupper(static_cast<unsigned char>(label[0])));
  std::size_t start = 1;
  if (label[start] == '_') ++start;
  const std::string digits = label.substr(start);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
    throw Error(ErrorCode::UnsupportedType, "type label '" + label + "'");
  return {t, std::stoi(digits)};
}

struct HeightClass {
  int k = 0;
  std::vector<int> positive;  // root indices
  std::vector<int> negative;
  std::vector<int> members() const {
    std::vector<int> all = negative;
    all.insert(all.end(), positive.begin(), positive.end());
    std::sort(all.begin(), all.end());
    return all;
  }
};

class RootSystem {
 public:
  static RootSystem build(char type, int rank) { return RootSystem(type, rank); }
  static RootSystem build(const std::string& label) {
    auto [t, n] = parse_type_label(label);
    return RootSystem(t, n);
  }

  char type() const { return type_; }
  int rank() const { return rank_; }
  std::string label() const { return std::string(1, type_) + std::to_string(rank_); }
  const IntMatrix& cartan() const { return cartan_; }

  /// Roots are indexed by their position in the total order (height, then
  /// lexicographic on coordinates).
  int num_roots() const { return static_cast<int>(roots_.size()); }
  int num_positive() const { return num_roots() / 2; }
  const RootVec& root(int i) const { return roots_.at(i); }
  int height(int i) const { return heights_.at(i); }
  bool is_positive(int i) const { return heights_.at(i) > 0; }
  int negation(int i) const { return negation_.at(i); }
  /// delta_gamma: 0 on positive roots, 1 on negative roots.
  int delta(int i) const { return is_positive(i) ? 0 : 1; }

  std::optional<int> index_of(const RootVec& v) const {
    auto it = index_.find(v);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  int index_or_throw(const RootVec& v) const {
    auto idx = index_of(v);
    if (!idx) throw Error(ErrorCode::BadIndex, "not a root");
    return *idx;
  }
  /// Index of a*root(i) + b*root(j), or -1 when that vector is not a root.
  int combination(int i, int a, int j, int b) const {
    RootVec v(rank_);
    for (int t = 0; t < rank_; ++t) v[t] = a * roots_[i][t] + b * roots_[j][t];
    auto idx = index_of(v);
    return idx ? *idx : -1;
  }
  int sum(int i, int j) const { return combination(i, 1, j, 1); }

  std::vector<int> positives() const {
    std::vector<int> out;
    for (int i = 0; i < num_roots(); ++i)
      if (is_positive(i)) out.push_back(i);
    return out;
  }
  std::vector<int> negatives() const {
    std::vector<int> out;
    for (int i = 0; i < num_roots(); ++i)
      if (!is_positive(i)) out.push_back(i);
    return out;
  }
  int simple(int j) const { return simple_.at(j); }
  /// Simple-root position j if root i is simple, else -1.
  int simple_position(int i) const {
    for (int j = 0; j < rank_; ++j)
      if (simple_[j] == i) return j;
    return -1;
  }
  int highest_root() const { return num_roots() - 1; }
  int lowest_root() const { return 0; }

  int coxeter_number() const { return 1 + heights_.back(); }

  /// The k in 1..h-1 with ht(root) = k mod h.
  int height_class_of(int i) const {
    const int h = coxeter_number();
    return static_cast<int>(mod_floor(heights_.at(i), h));
  }

  HeightClass height_class(int k) const {
    const int h = coxeter_number();
    if (k < 1 || k > h - 1) throw Error(ErrorCode::BadIndex, "height class index must lie in [1, h-1]");
    HeightClass hc;
    hc.k = k;
    for (int i = 0; i < num_roots(); ++i) {
      if (height_class_of(i) != k) continue;
      (is_positive(i) ? hc.positive : hc.negative).push_back(i);
    }
    return hc;
  }

  /// <root(i), alpha_j^vee>.
  int pairing_simple_coroot(int i, int j) const {
    std::int64_t s = 0;
    for (int t = 0; t < rank_; ++t) s += roots_[i][t] * cartan_[t][j];
    return static_cast<int>(s);
  }
  /// <root(i), lambda> for lambda given in the basis alpha_1^vee, ..., alpha_n^vee.
  int pairing(int i, const std::vector<int>& lambda) const {
    int s = 0;
    for (int j = 0; j < rank_; ++j) s += lambda[j] * pairing_simple_coroot(i, j);
    return s;
  }
  /// <root(i), root(j)^vee>.
  int pairing_roots(int i, int j) const { return pairing(i, coroot_coeffs(j)); }

  /// (root(i), root(i)) normalised so that short roots have squared length 2.
  int squared_length(int i) const {
    std::int64_t s = 0;
    for (int a = 0; a < rank_; ++a)
      for (int b = 0; b < rank_; ++b) s += roots_[i][a] * roots_[i][b] * cartan_[a][b] * half_lengths_[b];
    return static_cast<int>(s);
  }
  int half_length_simple(int j) const { return static_cast<int>(half_lengths_.at(j)); }

  /// Coordinates of root(i)^vee in the basis of simple coroots.
  std::vector<int> coroot_coeffs(int i) const {
    const int norm = squared_length(i);
    std::vector<int> out(rank_);
    for (int j = 0; j < rank_; ++j) out[j] = static_cast<int>(roots_[i][j] * 2 * half_lengths_[j] / norm);
    return out;
  }

  /// Largest m with root(j) - m root(i) a root.
  int string_down(int i, int j) const {
    int m = 0;
    while (combination(j, 1, i, -(m + 1)) >= 0) ++m;
    return m;
  }

  /// A simple root delta (returned as its position) with alpha + delta positive.
  int root_addition_partner(int i) const {
    if (!is_positive(i)) throw Error(ErrorCode::BadIndex, "root must be positive");
    for (int j = 0; j < rank_; ++j)
      if (sum(i, simple_[j]) >= 0) return j;
    throw Error(ErrorCode::HighestRoot, "positive root of maximal height has no addition partner");
  }
  /// For a negative root alpha that is not the lowest root, a simple root beta
  /// (returned as its position) with alpha - beta again negative.
  int negative_root_split(int i) const {
    if (is_positive(i)) throw Error(ErrorCode::BadIndex, "root must be negative");
    for (int j = 0; j < rank_; ++j) {
      const int prime = combination(i, 1, simple_[j], -1);
      if (prime >= 0 && !is_positive(prime)) return j;
    }
    throw Error(ErrorCode::HighestRoot, "negative root of minimal height cannot be split");
  }

  std::int64_t cartan_determinant() const { return bareiss_determinant(cartan_); }

  bool is_admissible(std::int64_t p) const { return is_prime(p) && p > coxeter_number() + 1; }

  std::int64_t smallest_admissible_prime() const {
    std::int64_t p = coxeter_number() + 2;
    while (!is_prime(p)) ++p;
    return p;
  }

 private:
  RootSystem(char type, int rank) : type_(type), rank_(rank), cartan_(cartan_matrix(type, rank)) {
    compute_lengths();
    enumerate();
  }

  void compute_lengths() {
    std::vector<std::int64_t> d(rank_, 0);
    d[0] = 6;
    bool changed = true;
    while (changed) {
      changed = false;
      for (int i = 0; i < rank_; ++i) {
        if (d[i] == 0) continue;
        for (int j = 0; j < rank_; ++j) {
          if (i == j || d[j] != 0 || cartan_[i][j] == 0) continue;
          d[j] = d[i] * cartan_[j][i] / cartan_[i][j];
          changed = true;
        }
      }
    }
    std::int64_t g = 0;
    for (auto x : d) g = std::gcd(g, x);
    half_lengths_.resize(rank_);
    for (int i = 0; i < rank_; ++i) half_lengths_[i] = d[i] / g;
  }

  void enumerate() {
    std::map<RootVec, bool> seen;
    std::vector<RootVec> layer;
    for (int j = 0; j < rank_; ++j) {
      RootVec v(rank_, 0);
      v[j] = 1;
      layer.push_back(v);
      seen[v] = true;
    }
    std::vector<RootVec> positives = layer;
    while (!layer.empty()) {
      std::vector<RootVec> next;
      for (const auto& beta : layer) {
        for (int i = 0; i < rank_; ++i) {
          int r = 0;
          for (;;) {
            RootVec w = beta;
            w[i] -= r + 1;
            if (!seen.count(w)) break;
            ++r;
          }
          std::int64_t pair = 0;
          for (int t = 0; t < rank_; ++t) pair += beta[t] * cartan_[t][i];
          if (r - pair <= 0) continue;
          RootVec up = beta;
          up[i] += 1;
          if (seen.count(up)) continue;
          seen[up] = true;
          next.push_back(up);
          positives.push_back(up);
        }
      }
      layer = std::move(next);
    }
    std::vector<RootVec> all = positives;
    for (const auto& v : positives) {
      RootVec n(v);
      for (auto& x : n) x = -x;
      all.push_back(n);
    }
    auto ht = [](const RootVec& v) { return std::accumulate(v.begin(), v.end(), 0); };
    std::sort(all.begin(), all.end(), [&](const RootVec& a, const RootVec& b) {
      const int ha = ht(a), hb = ht(b);
      if (ha != hb) return ha < hb;
      return a < b;
    });
    roots_ = all;
    for (int i = 0; i < num_roots(); ++i) {
      index_[roots_[i]] = i;
      heights_.push_back(ht(roots_[i]));
    }
    negation_.resize(roots_.size());
    for (int i = 0; i < num_roots(); ++i) {
      RootVec n(roots_[i]);
      for (auto& x : n) x = -x;
      negation_[i] = index_.at(n);
    }
    simple_.resize(rank_);
    for (int j = 0; j < rank_; ++j) {
      RootVec v(rank_, 0);
      v[j] = 1;
      simple_[j] = index_.at(v);
    }
  }

  char type_;
  int rank_;
  IntMatrix cartan_;
  std::vector<std::int64_t> half_lengths_;
  std::vector<RootVec> roots_;
  std::vector<int> heights_;
  std::vector<int> negation_;
  std::vector<int> simple_;
  std::map<RootVec, int> index_;
};

/// X_*(T) = Z^{rank + d_Z}: simple coroots first, then a basis of X_*(Z).
class CocharacterLattice {
 public:
  CocharacterLattice(const RootSystem& rs, int central_rank) : rs_(&rs), central_rank_(central_rank) {
    if (central_rank < 0) throw Error(ErrorCode::BadIndex, "central rank must be non-negative");
  }

  int rank_T() const { return rs_->rank() + central_rank_; }
  int central_rank() const { return central_rank_; }
  bool is_central(int basis_index) const { return basis_index >= rs_->rank(); }

  /// <root(i), lambda_b> for basis cocharacter b.
  int pairing(int root, int basis_index) const {
    if (basis_index < 0 || basis_index >= rank_T()) throw Error(ErrorCode::BadIndex, "cocharacter index");
    if (is_central(basis_index)) return 0;
    return rs_->pairing_simple_coroot(root, basis_index);
  }

  std::string basis_label(int basis_index) const {
    if (is_central(basis_index)) return "z" + std::to_string(basis_index - rs_->rank() + 1);
    return "a" + std::to_string(basis_index + 1) + "v";
  }

 private:
  const RootSystem* rs_;
  int central_rank_;
};

inline std::string root_label(const RootSystem& rs, int i) {
  std::string s = "[";
  for (int t = 0; t < rs.rank(); ++t) s += (t ? "," : "") + std::to_string(rs.root(i)[t]);
  return s + "]";
}

}  // namespace iwahori_gr
