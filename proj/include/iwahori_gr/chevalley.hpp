#pragma once

// Chevalley structure constants and the commutator-formula constants
// c_{a,b;i,j}, with certification through the integral Chevalley Lie algebra
// and explicit matrix models.

#include <algorithm>
#include <array>
#include <climits>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "iwahori_gr/error.hpp"
#include "iwahori_gr/matrix.hpp"
#include "iwahori_gr/padic_ring.hpp"
#include "iwahori_gr/root_system.hpp"

namespace iwahori_gr {

inline constexpr const char* kConventionId = "extraspecial-positive/height-lex-order/v1";

/// One factor u_root(c x^i y^j) of [u_a(x), u_b(y)].
struct CommutatorTerm {
  int i = 0;
  int j = 0;
  int root = -1;
  int c = 0;
};

using SparseIntVec = std::vector<std::pair<int, std::int64_t>>;

namespace detail {

inline void sparse_add(SparseIntVec& acc, int index, std::int64_t coeff) {
  if (coeff == 0) return;
  for (auto it = acc.begin(); it != acc.end(); ++it) {
    if (it->first == index) {
      it->second += coeff;
      if (it->second == 0) acc.erase(it);
      return;
    }
  }
  acc.emplace_back(index, coeff);
}

inline void sparse_normalise(SparseIntVec& v) {
  std::sort(v.begin(), v.end());
  std::erase_if(v, [](const auto& t) { return t.second == 0; });
}

}  // namespace detail

class StructureConstants {
 public:
  static StructureConstants compute(const RootSystem& rs) {
    StructureConstants sc;
    sc.rs_ = std::make_shared<const RootSystem>(rs);
    const int R = rs.num_roots();
    sc.n_.assign(static_cast<std::size_t>(R) * R, kUnset);
    for (int a = 0; a < R; ++a)
      for (int b = 0; b < R; ++b) sc.n_[a * R + b] = rs.sum(a, b) >= 0 ? sc.compute_n(a, b) : 0;
    sc.compute_terms();
    return sc;
  }

  const RootSystem& roots() const { return *rs_; }
  const std::string& convention_id() const { return convention_; }

  /// N_{a,b} with [e_a, e_b] = N_{a,b} e_{a+b}; zero when a+b is not a root.
  int N(int a, int b) const { return n_[a * rs_->num_roots() + b]; }

  /// Factors of [u_a(x), u_b(y)] in increasing total order of iA+jB.
  const std::vector<CommutatorTerm>& terms(int a, int b) const {
    if (a == b || rs_->negation(a) == b) throw Error(ErrorCode::OppositeRoots, "commutator formula needs b != +-a");
    return terms_[a * rs_->num_roots() + b];
  }

  /// c_{a,b;i,j}, zero when iA+jB is not a root.
  int c(int a, int b, int i, int j) const {
    for (const auto& t : terms(a, b))
      if (t.i == i && t.j == j) return t.c;
    return 0;
  }

  /// (a, b) with a minimal in the total order such that a + b = xi, for each
  /// positive non-simple xi.
  std::vector<std::pair<int, int>> extraspecial_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int xi : rs_->positives()) {
      auto pr = extraspecial(xi);
      if (pr.first >= 0) out.push_back(pr);
    }
    return out;
  }

  /// Copy with N_{a,b} and N_{b,a} negated and nothing else changed; used to
  /// confirm that certification detects a corrupted table.
  StructureConstants with_flipped_sign(int a, int b) const {
    StructureConstants copy = *this;
    const int R = rs_->num_roots();
    copy.n_[a * R + b] = -copy.n_[a * R + b];
    copy.n_[b * R + a] = -copy.n_[b * R + a];
    for (auto* pair : {&copy.terms_[a * R + b], &copy.terms_[b * R + a]})
      for (auto& t : *pair)
        if (t.i == 1 && t.j == 1) t.c = -t.c;
    copy.convention_ += "+tampered";
    return copy;
  }

 private:
  static constexpr int kUnset = INT_MIN;

  std::pair<int, int> extraspecial(int xi) const {
    for (int a : rs_->positives()) {
      const int b = rs_->combination(xi, 1, a, -1);
      if (b >= 0 && rs_->is_positive(b)) return {a, b};
    }
    return {-1, -1};
  }

  int compute_n(int a, int b) {
    const RootSystem& rs = *rs_;
    const int R = rs.num_roots();
    int& slot = n_[a * R + b];
    if (slot != kUnset) return slot;
    const int c = rs.sum(a, b);
    if (c < 0) return slot = 0;
    const bool pa = rs.is_positive(a), pb = rs.is_positive(b);
    int value;
    if (pa && pb) {
      value = positive_n(a, b);
    } else if (!pa && !pb) {
      value = -compute_n(rs.negation(a), rs.negation(b));
    } else {
      // a + b + (-c) = 0 gives N_{a,b}/(c,c) = N_{b,-c}/(a,a) = N_{-c,a}/(b,b).
      const int mc = rs.negation(c);
      const bool use_b = rs.is_positive(b) == rs.is_positive(mc);
      const int other = use_b ? compute_n(b, mc) : compute_n(mc, a);
      const int num = rs.squared_length(c) * other;
      const int den = use_b ? rs.squared_length(a) : rs.squared_length(b);
      value = num / den;
    }
    return slot = value;
  }

  int positive_n(int a, int b) {
    const RootSystem& rs = *rs_;
    if (a > b) return -compute_n(b, a);
    const int xi = rs.sum(a, b);
    auto [r1, s1] = extraspecial(xi);
    if (r1 == a) return rs.string_down(r1, s1) + 1;
    // Jacobi applied to e_a, e_b, e_{-r1}, e_{-s1}.
    const int nr1s1 = compute_n(r1, s1);
    std::int64_t num = 0;
    constexpr std::int64_t L = 12;
    const int d1 = rs.combination(b, 1, r1, -1);
    if (d1 >= 0)
      num += static_cast<std::int64_t>(compute_n(b, rs.negation(r1))) * compute_n(a, rs.negation(s1)) * L /
             rs.squared_length(d1);
    const int d2 = rs.combination(a, 1, r1, -1);
    if (d2 >= 0)
      num += static_cast<std::int64_t>(compute_n(rs.negation(r1), a)) * compute_n(b, rs.negation(s1)) * L /
             rs.squared_length(d2);
    num *= rs.squared_length(xi);
    const std::int64_t den = L * nr1s1;
    if (num % den != 0) throw Error(ErrorCode::CertificationFailure, "non-integral structure constant");
    return static_cast<int>(num / den);
  }

  void compute_terms();

  std::shared_ptr<const RootSystem> rs_;
  std::vector<int> n_;
  std::vector<std::vector<CommutatorTerm>> terms_;
  std::string convention_ = kConventionId;
};

/// Integral Lie algebra with basis e_gamma (indices 0..|Phi|-1 in root order)
/// followed by h_1..h_n.
class ChevalleyLie {
 public:
  explicit ChevalleyLie(const StructureConstants& sc) : sc_(&sc) {
    const RootSystem& rs = sc.roots();
    const int R = rs.num_roots(), D = dim();
    table_.assign(static_cast<std::size_t>(D) * D, {});
    for (int a = 0; a < D; ++a)
      for (int b = 0; b < D; ++b) table_[a * D + b] = compute(a, b, R);
  }

  int dim() const { return sc_->roots().num_roots() + sc_->roots().rank(); }
  int h_index(int j) const { return sc_->roots().num_roots() + j; }
  const SparseIntVec& bracket(int a, int b) const { return table_[a * dim() + b]; }

  SparseIntVec bracket(const SparseIntVec& x, const SparseIntVec& y) const {
    SparseIntVec out;
    for (const auto& [a, ca] : x)
      for (const auto& [b, cb] : y)
        for (const auto& [k, ck] : bracket(a, b)) detail::sparse_add(out, k, ca * cb * ck);
    detail::sparse_normalise(out);
    return out;
  }

  /// ad(basis a) applied to a dense vector.
  std::vector<std::int64_t> ad(int a, const std::vector<std::int64_t>& v) const {
    std::vector<std::int64_t> out(v.size(), 0);
    for (int k = 0; k < dim(); ++k) {
      if (v[k] == 0) continue;
      for (const auto& [t, c] : bracket(a, k)) out[t] += c * v[k];
    }
    return out;
  }

  /// exp(t ad e_root) v; ad e_root is nilpotent with integral divided powers.
  std::vector<std::int64_t> apply_root_element(int root, std::int64_t t, std::vector<std::int64_t> v) const {
    std::vector<std::int64_t> term = v;
    for (int k = 1; k < 8; ++k) {
      term = ad(root, term);
      bool zero = true;
      for (auto& x : term) {
        if (x % k != 0) throw Error(ErrorCode::CertificationFailure, "non-integral divided power");
        x = x / k * t;
        if (x != 0) zero = false;
      }
      if (zero) break;
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += term[i];
    }
    return v;
  }

 private:
  SparseIntVec compute(int a, int b, int R) const {
    const RootSystem& rs = sc_->roots();
    SparseIntVec out;
    const bool ra = a < R, rb = b < R;
    if (ra && rb) {
      if (rs.negation(a) == b) {
        const auto cc = rs.coroot_coeffs(a);
        for (int j = 0; j < rs.rank(); ++j)
          if (cc[j] != 0) out.emplace_back(R + j, cc[j]);
      } else if (int s = rs.sum(a, b); s >= 0) {
        out.emplace_back(s, sc_->N(a, b));
      }
    } else if (!ra && rb) {
      const int pr = rs.pairing_simple_coroot(b, a - R);
      if (pr != 0) out.emplace_back(b, pr);
    } else if (ra && !rb) {
      const int pr = rs.pairing_simple_coroot(a, b - R);
      if (pr != 0) out.emplace_back(a, -pr);
    }
    detail::sparse_normalise(out);
    return out;
  }

  const StructureConstants* sc_;
  std::vector<SparseIntVec> table_;
};

inline void StructureConstants::compute_terms() {
  const RootSystem& rs = *rs_;
  const int R = rs.num_roots();
  terms_.assign(static_cast<std::size_t>(R) * R, {});
  std::unique_ptr<ChevalleyLie> lie;
  const std::array<std::pair<std::int64_t, std::int64_t>, 5> points{{{1, 1}, {1, -1}, {-1, 2}, {2, -1}, {2, 2}}};

  for (int a = 0; a < R; ++a) {
    for (int b = 0; b < R; ++b) {
      if (a == b || rs.negation(a) == b) continue;
      std::vector<CommutatorTerm> ts;
      for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) {
          const int g = rs.combination(a, i, b, j);
          if (g >= 0) ts.push_back({i, j, g, (i == 1 && j == 1) ? N(a, b) : 0});
        }
      std::sort(ts.begin(), ts.end(), [](const auto& x, const auto& y) { return x.root < y.root; });
      const bool higher = std::any_of(ts.begin(), ts.end(), [](const auto& t) { return t.i + t.j > 2; });
      if (higher) {
        if (!lie) lie = std::make_unique<ChevalleyLie>(*this);
        std::vector<std::size_t> free;
        for (std::size_t k = 0; k < ts.size(); ++k)
          if (ts[k].i + ts[k].j > 2) free.push_back(k);
        const int candidates[] = {1, -1, 2, -2, 3, -3};
        std::size_t total = 1;
        for (std::size_t k = 0; k < free.size(); ++k) total *= 6;
        bool found = false;
        for (std::size_t code = 0; code < total && !found; ++code) {
          std::size_t c = code;
          for (auto k : free) {
            ts[k].c = candidates[c % 6];
            c /= 6;
          }
          found = true;
          for (const auto& [x, y] : points) {
            for (int basis = 0; basis < lie->dim() && found; ++basis) {
              std::vector<std::int64_t> v(lie->dim(), 0), w;
              v[basis] = 1;
              w = v;
              v = lie->apply_root_element(b, -y, v);
              v = lie->apply_root_element(a, -x, v);
              v = lie->apply_root_element(b, y, v);
              v = lie->apply_root_element(a, x, v);
              for (auto it = ts.rbegin(); it != ts.rend(); ++it) {
                std::int64_t coeff = it->c;
                for (int e = 0; e < it->i; ++e) coeff *= x;
                for (int e = 0; e < it->j; ++e) coeff *= y;
                w = lie->apply_root_element(it->root, coeff, w);
              }
              if (v != w) found = false;
            }
            if (!found) break;
          }
        }
        if (!found)
          throw Error(ErrorCode::CertificationFailure,
                      "no commutator constants in {+-1,+-2,+-3} for pair " + root_label(rs, a) + "," + root_label(rs, b));
      }
      terms_[a * R + b] = std::move(ts);
    }
  }
}

/// The ordered factors of [u_a(x), u_b(y)] as (root, c x^i y^j).
inline std::vector<std::pair<int, TruncatedUnramified>> commutator_expansion(const StructureConstants& sc, int a,
                                                                             int b, const TruncatedUnramified& x,
                                                                             const TruncatedUnramified& y) {
  std::vector<std::pair<int, TruncatedUnramified>> out;
  for (const auto& t : sc.terms(a, b)) {
    TruncatedUnramified v = x.pow(t.i) * y.pow(t.j);
    out.emplace_back(t.root, v.scaled(t.c));
  }
  return out;
}

struct CertificationReport {
  std::string type_label;
  std::string convention_id;
  long triples_checked = 0;
  std::vector<std::int64_t> primes_checked;
  std::string matrix_model = "none";
  long matrix_checks = 0;
};

namespace detail {

inline std::string basis_label(const RootSystem& rs, int k) {
  if (k < rs.num_roots()) return "e" + root_label(rs, k);
  return "h" + std::to_string(k - rs.num_roots() + 1);
}

inline IntDense matrix_exp_nilpotent(const IntDense& e, std::int64_t t) {
  IntDense result = int_identity(e.rows());
  IntDense term = int_identity(e.rows());
  for (int k = 1; k < 8; ++k) {
    term = term * e;
    if (term.is_zero()) break;
    IntDense add = term;
    for (std::size_t i = 0; i < add.rows(); ++i)
      for (std::size_t j = 0; j < add.cols(); ++j) {
        std::int64_t v = add(i, j);
        for (int s = 0; s < k; ++s) v *= t;
        std::int64_t fact = 1;
        for (int s = 2; s <= k; ++s) fact *= s;
        if (v % fact != 0) throw Error(ErrorCode::CertificationFailure, "non-integral exponential");
        add(i, j) = v / fact;
      }
    result = result + add;
  }
  return result;
}

}  // namespace detail

/// Root matrices derived from images of the simple root vectors: the
/// non-simple ones are forced by e_{r+s} = [e_r, e_s] / N_{r,s} along
/// extraspecial pairs.
inline std::vector<IntDense> derive_root_matrices(const StructureConstants& sc, const std::vector<IntDense>& simple_pos,
                                                  const std::vector<IntDense>& simple_neg) {
  const RootSystem& rs = sc.roots();
  std::vector<IntDense> e(rs.num_roots());
  for (int j = 0; j < rs.rank(); ++j) {
    e[rs.simple(j)] = simple_pos[j];
    e[rs.negation(rs.simple(j))] = simple_neg[j];
  }
  for (auto [r, s] : sc.extraspecial_pairs()) {
    const int xi = rs.sum(r, s);
    for (int sign = 0; sign < 2; ++sign) {
      const int a = sign ? rs.negation(r) : r, b = sign ? rs.negation(s) : s;
      const int target = sign ? rs.negation(xi) : xi;
      IntDense br = lie_bracket(e[a], e[b]);
      const int n = sc.N(a, b);
      for (std::size_t i = 0; i < br.rows(); ++i)
        for (std::size_t k = 0; k < br.cols(); ++k) {
          if (br(i, k) % n != 0) throw Error(ErrorCode::CertificationFailure, "root matrix not divisible by N");
          br(i, k) /= n;
        }
      e[target] = br;
    }
  }
  return e;
}

/// Checks every Chevalley relation and every commutator-formula instance in a
/// faithful matrix representation; returns the number of identities checked.
inline long check_matrix_model(const StructureConstants& sc, const std::vector<IntDense>& e) {
  const RootSystem& rs = sc.roots();
  const int R = rs.num_roots();
  long checks = 0;
  auto fail = [&](int a, int b, const std::string& what) {
    return Error(ErrorCode::CertificationFailure,
                 "matrix model " + what + " at " + root_label(rs, a) + "," + root_label(rs, b));
  };
  std::vector<IntDense> h(rs.rank());
  for (int j = 0; j < rs.rank(); ++j) h[j] = lie_bracket(e[rs.simple(j)], e[rs.negation(rs.simple(j))]);
  for (int j = 0; j < rs.rank(); ++j)
    for (int g = 0; g < R; ++g) {
      ++checks;
      if (!(lie_bracket(h[j], e[g]) == e[g].scaled(rs.pairing_simple_coroot(g, j)))) throw fail(g, g, "[h,e]");
    }
  const std::array<std::pair<std::int64_t, std::int64_t>, 3> points{{{1, 1}, {2, -1}, {-1, 3}}};
  for (int a = 0; a < R; ++a)
    for (int b = 0; b < R; ++b) {
      if (a == b) continue;
      IntDense expect(e[a].rows(), e[a].cols(), 0);
      if (rs.negation(a) == b) {
        const auto cc = rs.coroot_coeffs(a);
        for (int j = 0; j < rs.rank(); ++j) expect = expect + h[j].scaled(cc[j]);
      } else if (int s = rs.sum(a, b); s >= 0) {
        expect = e[s].scaled(sc.N(a, b));
      }
      ++checks;
      if (!(lie_bracket(e[a], e[b]) == expect)) throw fail(a, b, "bracket");
      if (rs.negation(a) == b) continue;
      for (const auto& [x, y] : points) {
        const IntDense lhs = detail::matrix_exp_nilpotent(e[a], x) * detail::matrix_exp_nilpotent(e[b], y) *
                             detail::matrix_exp_nilpotent(e[a], -x) * detail::matrix_exp_nilpotent(e[b], -y);
        IntDense rhs = int_identity(e[a].rows());
        for (const auto& t : sc.terms(a, b)) {
          std::int64_t coeff = t.c;
          for (int k = 0; k < t.i; ++k) coeff *= x;
          for (int k = 0; k < t.j; ++k) coeff *= y;
          rhs = rhs * detail::matrix_exp_nilpotent(e[t.root], coeff);
        }
        ++checks;
        if (!(lhs == rhs)) throw fail(a, b, "group commutator");
      }
    }
  return checks;
}

/// Root matrices of SL_{n+1} in the given convention: e_gamma = s_gamma E_{ij}.
inline std::vector<IntDense> type_a_root_matrices(const StructureConstants& sc) {
  const RootSystem& rs = sc.roots();
  if (rs.type() != 'A') throw Error(ErrorCode::UnsupportedType, "type A matrix model requires type A");
  const std::size_t d = rs.rank() + 1;
  std::vector<IntDense> pos, neg;
  for (int j = 0; j < rs.rank(); ++j) {
    pos.push_back(elementary(d, j, j + 1));
    neg.push_back(elementary(d, j + 1, j));
  }
  return derive_root_matrices(sc, pos, neg);
}

/// Root matrices of Sp_4 for the C_2 root system (alpha_1 short, alpha_2 long).
inline std::vector<IntDense> sp4_root_matrices(const StructureConstants& sc) {
  const RootSystem& rs = sc.roots();
  if (rs.type() != 'C' || rs.rank() != 2) throw Error(ErrorCode::UnsupportedType, "Sp4 model requires C2");
  const IntDense pos1 = elementary(4, 0, 1) - elementary(4, 3, 2);
  const IntDense neg1 = elementary(4, 1, 0) - elementary(4, 2, 3);
  return derive_root_matrices(sc, {pos1, elementary(4, 1, 3)}, {neg1, elementary(4, 3, 1)});
}

/// Position (row, col) and sign of e_gamma = s E_{row,col} in the type A model.
struct TypeAEntry {
  int row = 0;
  int col = 0;
  int sign = 1;
};

inline std::vector<TypeAEntry> type_a_entries(const StructureConstants& sc) {
  const auto mats = type_a_root_matrices(sc);
  std::vector<TypeAEntry> out;
  for (const auto& m : mats) {
    TypeAEntry t;
    int found = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (m(i, j) != 0) {
          t = {static_cast<int>(i), static_cast<int>(j), static_cast<int>(m(i, j))};
          ++found;
        }
    if (found != 1 || (t.sign != 1 && t.sign != -1))
      throw Error(ErrorCode::CertificationFailure, "type A root matrix is not a signed elementary matrix");
    out.push_back(t);
  }
  return out;
}

/// Jacobi identity and antisymmetry on all basis triples over Z and modulo
/// the first few admissible primes, plus matrix-model checks in types A and C2.
inline CertificationReport certify_constants(const StructureConstants& sc, int prime_count = 3) {
  const RootSystem& rs = sc.roots();
  CertificationReport rep;
  rep.type_label = rs.label();
  rep.convention_id = sc.convention_id();
  for (std::int64_t p = rs.smallest_admissible_prime(); static_cast<int>(rep.primes_checked.size()) < prime_count; ++p)
    if (is_prime(p)) rep.primes_checked.push_back(p);

  for (int a = 0; a < rs.num_roots(); ++a)
    for (int b = 0; b < rs.num_roots(); ++b) {
      if (b == a || b == rs.negation(a)) continue;
      for (const auto& t : sc.terms(a, b)) {
        const int mag = std::abs(t.c);
        if (mag < 1 || mag > 3)
          throw Error(ErrorCode::CertificationFailure, "constant out of range at " + root_label(rs, a) + "," + root_label(rs, b));
        if (t.i == 1 && t.j == 1 && mag != rs.string_down(a, b) + 1)
          throw Error(ErrorCode::CertificationFailure, "|N| != p+1 at " + root_label(rs, a) + "," + root_label(rs, b));
      }
    }

  const ChevalleyLie lie(sc);
  const int D = lie.dim();
  for (int a = 0; a < D; ++a)
    for (int b = a; b < D; ++b) {
      SparseIntVec sum = lie.bracket(a, b);
      for (const auto& [k, c] : lie.bracket(b, a)) detail::sparse_add(sum, k, c);
      if (!sum.empty())
        throw Error(ErrorCode::CertificationFailure,
                    "antisymmetry fails at (" + detail::basis_label(rs, a) + ", " + detail::basis_label(rs, b) + ")");
    }
  for (int a = 0; a < D; ++a)
    for (int b = a + 1; b < D; ++b)
      for (int c = b + 1; c < D; ++c) {
        ++rep.triples_checked;
        SparseIntVec total;
        auto acc = [&](int x, int y, int z) {
          for (const auto& [k, cyz] : lie.bracket(y, z))
            for (const auto& [m, cx] : lie.bracket(x, k)) detail::sparse_add(total, m, cyz * cx);
        };
        acc(a, b, c);
        acc(b, c, a);
        acc(c, a, b);
        bool zero_mod_all = true;
        for (const auto& [k, v] : total) {
          (void)k;
          if (v != 0) zero_mod_all = false;
          for (auto p : rep.primes_checked)
            if (v % p != 0) zero_mod_all = false;
        }
        if (!zero_mod_all) {
          std::ostringstream os;
          os << "Jacobi fails at (" << detail::basis_label(rs, a) << ", " << detail::basis_label(rs, b) << ", "
             << detail::basis_label(rs, c) << ")";
          throw Error(ErrorCode::CertificationFailure, os.str());
        }
      }

  if (rs.type() == 'A') {
    rep.matrix_model = "SL" + std::to_string(rs.rank() + 1);
    rep.matrix_checks = check_matrix_model(sc, type_a_root_matrices(sc));
  } else if (rs.type() == 'C' && rs.rank() == 2) {
    rep.matrix_model = "Sp4";
    rep.matrix_checks = check_matrix_model(sc, sp4_root_matrices(sc));
  }
  return rep;
}

}  // namespace iwahori_gr
