#pragma once

// Pro-p Iwahori elements in Iwahori coordinates, the p-valuation omega, the
// filtration I_nu, and matrix models (SL_{n+1} for type A, SL_2 along a root).

#include <algorithm>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "iwahori_gr/chevalley.hpp"
#include "iwahori_gr/error.hpp"
#include "iwahori_gr/matrix.hpp"
#include "iwahori_gr/padic_ring.hpp"
#include "iwahori_gr/root_system.hpp"

namespace iwahori_gr {

/// Shared data for one split datum (root system, ring, central rank).
struct IwahoriContext {
  RootSystem rs;
  Ring ring;
  StructureConstants sc;
  int central_rank = 0;
  std::vector<TypeAEntry> type_a;  // empty unless rs is of type A

  int h() const { return rs.coxeter_number(); }
  int torus_rank() const { return rs.rank() + central_rank; }
  CocharacterLattice lattice() const { return CocharacterLattice(rs, central_rank); }
};

using Context = std::shared_ptr<const IwahoriContext>;

inline Context make_context(const RootSystem& rs, const Ring& ring, int central_rank = 0) {
  if (central_rank < 0) throw Error(ErrorCode::BadIndex, "central rank must be non-negative");
  auto sc = StructureConstants::compute(rs);
  std::vector<TypeAEntry> entries;
  if (rs.type() == 'A') entries = type_a_entries(sc);
  return std::make_shared<const IwahoriContext>(IwahoriContext{rs, ring, std::move(sc), central_rank, std::move(entries)});
}

/// An element of (1/h)Z stored as its numerator.
struct Grade {
  std::int64_t scaled = 0;
  int h = 1;

  friend auto operator<=>(const Grade& a, const Grade& b) { return a.scaled <=> b.scaled; }
  friend bool operator==(const Grade& a, const Grade& b) { return a.scaled == b.scaled; }
  std::string to_string() const { return std::to_string(scaled) + "/" + std::to_string(h); }
};

/// omega of a truncated element: either exact, or only bounded below because
/// the decisive coordinates vanish modulo p^N.
struct OmegaValue {
  Grade value;
  bool exact = true;

  std::string to_string() const { return (exact ? "" : ">=") + value.to_string(); }
};

class IwahoriElement {
 public:
  explicit IwahoriElement(Context ctx) : ctx_(std::move(ctx)) {
    const auto zero = TruncatedUnramified::zero(ctx_->ring);
    roots_.assign(ctx_->rs.num_roots(), zero);
    torus_.assign(ctx_->torus_rank(), TruncatedUnramified::one(ctx_->ring));
  }

  static IwahoriElement identity(const Context& ctx) { return IwahoriElement(ctx); }

  /// u_root(x); negative roots need val(x) >= 1.
  static IwahoriElement root_element(const Context& ctx, int root, const TruncatedUnramified& x) {
    IwahoriElement e(ctx);
    e.set_root(root, x);
    return e;
  }

  /// lambda_b(t) for basis cocharacter b and t = 1 mod p.
  static IwahoriElement torus_element(const Context& ctx, int basis, const TruncatedUnramified& t) {
    IwahoriElement e(ctx);
    e.set_torus(basis, t);
    return e;
  }

  /// lambda(t) for lambda = sum_j coeffs[j] alpha_j^vee.
  static IwahoriElement cocharacter_element(const Context& ctx, const std::vector<int>& coeffs,
                                            const TruncatedUnramified& t) {
    IwahoriElement e(ctx);
    for (std::size_t j = 0; j < coeffs.size(); ++j) e.set_torus(static_cast<int>(j), power_signed(t, coeffs[j]));
    return e;
  }

  const Context& context() const { return ctx_; }
  const TruncatedUnramified& root_coord(int root) const { return roots_.at(root); }
  const TruncatedUnramified& torus_coord(int basis) const { return torus_.at(basis); }

  void set_root(int root, const TruncatedUnramified& x) {
    if (!ctx_->rs.is_positive(root) && !x.is_zero() && x.valuation().value() < 1)
      throw Error(ErrorCode::BadIndex, "negative root coordinates must lie in pO_F");
    roots_.at(root) = x;
  }
  void set_torus(int basis, const TruncatedUnramified& t) {
    if (!(t - TruncatedUnramified::one(ctx_->ring)).residue().is_zero())
      throw Error(ErrorCode::NotAUnit, "torus coordinates must be 1 mod p");
    torus_.at(basis) = t;
  }

  bool is_identity() const {
    return std::all_of(roots_.begin(), roots_.end(), [](const auto& x) { return x.is_zero(); }) &&
           std::all_of(torus_.begin(), torus_.end(), [](const auto& t) { return t.is_one(); });
  }

  /// Root indices with a nonzero coordinate.
  std::vector<int> root_support() const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(roots_.size()); ++i)
      if (!roots_[i].is_zero()) out.push_back(i);
    return out;
  }

  friend bool operator==(const IwahoriElement& a, const IwahoriElement& b) {
    return a.roots_ == b.roots_ && a.torus_ == b.torus_;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["roots"] = nlohmann::json::object();
    for (int i = 0; i < static_cast<int>(roots_.size()); ++i)
      if (!roots_[i].is_zero()) j["roots"][root_label(ctx_->rs, i)] = roots_[i].coeffs();
    j["torus"] = nlohmann::json::object();
    const auto lat = ctx_->lattice();
    for (int b = 0; b < static_cast<int>(torus_.size()); ++b)
      if (!torus_[b].is_one()) j["torus"][lat.basis_label(b)] = torus_[b].coeffs();
    return j;
  }

  static TruncatedUnramified power_signed(const TruncatedUnramified& t, int e) {
    if (e >= 0) return t.pow(static_cast<std::uint64_t>(e));
    return t.inv_unit().pow(static_cast<std::uint64_t>(-e));
  }

 private:
  Context ctx_;
  std::vector<TruncatedUnramified> roots_;
  std::vector<TruncatedUnramified> torus_;
};

/// Lower bound for h*omega of a coordinate that vanishes modulo p^N.
inline std::int64_t truncated_root_bound(const IwahoriContext& ctx, int root) {
  return static_cast<std::int64_t>(ctx.h()) * ctx.ring->N + ctx.rs.height(root);
}

inline std::int64_t truncated_torus_bound(const IwahoriContext& ctx) {
  return static_cast<std::int64_t>(ctx.h()) * ctx.ring->N;
}

/// Smallest h*omega that a nontrivial coordinate can hide below the precision.
inline std::int64_t precision_floor(const IwahoriContext& ctx) {
  return static_cast<std::int64_t>(ctx.h()) * (ctx.ring->N - 1) + 1;
}

/// Per-coordinate contributions h*(val + ht/h) and h*depth.
struct CoordinateGrades {
  std::vector<std::optional<std::int64_t>> roots;  // nullopt when the coordinate vanishes
  std::vector<std::optional<std::int64_t>> torus;
};

inline CoordinateGrades coordinate_grades(const IwahoriElement& e) {
  const auto& ctx = *e.context();
  CoordinateGrades g;
  const int h = ctx.h();
  for (int i = 0; i < ctx.rs.num_roots(); ++i) {
    const auto v = e.root_coord(i).valuation();
    if (v.is_infinite())
      g.roots.emplace_back(std::nullopt);
    else
      g.roots.emplace_back(static_cast<std::int64_t>(h) * v.value() + ctx.rs.height(i));
  }
  const auto one = TruncatedUnramified::one(ctx.ring);
  for (int b = 0; b < ctx.torus_rank(); ++b) {
    const auto v = (e.torus_coord(b) - one).valuation();
    if (v.is_infinite())
      g.torus.emplace_back(std::nullopt);
    else
      g.torus.emplace_back(static_cast<std::int64_t>(h) * v.value());
  }
  return g;
}

inline OmegaValue omega(const IwahoriElement& e) {
  const auto& ctx = *e.context();
  if (e.is_identity()) throw Error(ErrorCode::IdentityElement, "omega is infinite on the identity");
  const auto g = coordinate_grades(e);
  std::optional<std::int64_t> finite;
  std::int64_t hidden = INT64_MAX;
  for (int i = 0; i < ctx.rs.num_roots(); ++i) {
    if (g.roots[i])
      finite = finite ? std::min(*finite, *g.roots[i]) : *g.roots[i];
    else
      hidden = std::min(hidden, truncated_root_bound(ctx, i));
  }
  for (int b = 0; b < ctx.torus_rank(); ++b) {
    if (g.torus[b])
      finite = finite ? std::min(*finite, *g.torus[b]) : *g.torus[b];
    else
      hidden = std::min(hidden, truncated_torus_bound(ctx));
  }
  if (*finite <= hidden) return {Grade{*finite, ctx.h()}, true};
  return {Grade{hidden, ctx.h()}, false};
}

/// omega with the identity mapped to the precision lower bound.
inline OmegaValue omega_or_bound(const IwahoriElement& e) {
  if (e.is_identity()) {
    const auto& ctx = *e.context();
    std::int64_t hidden = truncated_torus_bound(ctx);
    for (int i = 0; i < ctx.rs.num_roots(); ++i) hidden = std::min(hidden, truncated_root_bound(ctx, i));
    return {Grade{hidden, ctx.h()}, false};
  }
  return omega(e);
}

/// Membership in I_nu (strict = false) or I_{nu+} (strict = true), with nu
/// given as h*nu. Throws PrecisionExceeded when the answer depends on digits
/// beyond p^N.
inline bool filtration_member(const IwahoriElement& e, std::int64_t scaled_nu, bool strict) {
  const auto& ctx = *e.context();
  const auto g = coordinate_grades(e);
  auto passes = [&](std::int64_t v) { return strict ? v > scaled_nu : v >= scaled_nu; };
  bool member = true;
  for (int i = 0; i < ctx.rs.num_roots(); ++i) {
    if (g.roots[i]) {
      member = member && passes(*g.roots[i]);
    } else if (!passes(truncated_root_bound(ctx, i))) {
      throw Error(ErrorCode::PrecisionExceeded, "filtration level beyond the certified range");
    }
  }
  for (int b = 0; b < ctx.torus_rank(); ++b) {
    if (g.torus[b]) {
      member = member && passes(*g.torus[b]);
    } else if (!passes(truncated_torus_bound(ctx))) {
      throw Error(ErrorCode::PrecisionExceeded, "filtration level beyond the certified range");
    }
  }
  return member;
}

using RingMatrix = DenseMatrix<TruncatedUnramified>;

namespace detail {

inline RingMatrix ring_identity(const Ring& ring, std::size_t n) {
  return RingMatrix::identity(n, TruncatedUnramified::zero(ring), TruncatedUnramified::one(ring));
}

inline void apply_elementary_right(RingMatrix& m, int row, int col, const TruncatedUnramified& x) {
  // m <- m (I + x E_{row,col}): column col += x * column row.
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, col) = m(i, col) + m(i, row) * x;
}

inline void apply_elementary_left(RingMatrix& m, int row, int col, const TruncatedUnramified& x) {
  // m <- (I + x E_{row,col}) m: row row += x * row col.
  for (std::size_t j = 0; j < m.cols(); ++j) m(row, j) = m(row, j) + x * m(col, j);
}

inline TruncatedUnramified signed_value(const TruncatedUnramified& x, int sign) { return sign > 0 ? x : -x; }

/// Diagonal entries of prod_j alpha_j^vee(t_j) in SL_{n+1}.
inline std::vector<TruncatedUnramified> type_a_diagonal(const IwahoriElement& e) {
  const auto& ctx = *e.context();
  const int n = ctx.rs.rank();
  std::vector<TruncatedUnramified> d(n + 1, TruncatedUnramified::one(ctx.ring));
  for (int j = 0; j < n; ++j) {
    d[j] = d[j] * e.torus_coord(j);
    d[j + 1] = d[j + 1] * e.torus_coord(j).inv_unit();
  }
  return d;
}

}  // namespace detail

/// Image in SL_{n+1}(O_F/p^N) (type A only; central coordinates are dropped).
inline RingMatrix to_type_a_matrix(const IwahoriElement& e) {
  const auto& ctx = *e.context();
  if (ctx.rs.type() != 'A') throw Error(ErrorCode::UnsupportedType, "matrix model needs type A");
  const int d = ctx.rs.rank() + 1;
  RingMatrix m = detail::ring_identity(ctx.ring, d);
  for (int i : ctx.rs.negatives())
    if (!e.root_coord(i).is_zero()) {
      const auto& t = ctx.type_a[i];
      detail::apply_elementary_right(m, t.row, t.col, detail::signed_value(e.root_coord(i), t.sign));
    }
  const auto diag = detail::type_a_diagonal(e);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = m(i, j) * diag[j];
  for (int i : ctx.rs.positives())
    if (!e.root_coord(i).is_zero()) {
      const auto& t = ctx.type_a[i];
      detail::apply_elementary_right(m, t.row, t.col, detail::signed_value(e.root_coord(i), t.sign));
    }
  return m;
}

/// Iwahori coordinates of a matrix in the image of I (type A). Central
/// coordinates are copied from `central_source` when given.
inline IwahoriElement from_type_a_matrix(const Context& ctx, RingMatrix m,
                                         const IwahoriElement* central_source = nullptr) {
  if (ctx->rs.type() != 'A') throw Error(ErrorCode::UnsupportedType, "matrix model needs type A");
  const int d = ctx->rs.rank() + 1;
  const Ring& ring = ctx->ring;
  const auto one = TruncatedUnramified::one(ring);
  RingMatrix L = detail::ring_identity(ring, d), U = detail::ring_identity(ring, d);
  std::vector<TruncatedUnramified> diag;
  for (int k = 0; k < d; ++k) {
    const auto pivot = m(k, k);
    if (!pivot.is_unit()) throw Error(ErrorCode::NotFactorizable, "non-unit pivot");
    if (!(pivot - one).residue().is_zero()) throw Error(ErrorCode::NotFactorizable, "diagonal not 1 mod p");
    const auto inv = pivot.inv_unit();
    diag.push_back(pivot);
    for (int i = k + 1; i < d; ++i) {
      L(i, k) = m(i, k) * inv;
      if (!L(i, k).residue().is_zero()) throw Error(ErrorCode::NotFactorizable, "lower part not divisible by p");
    }
    for (int j = k + 1; j < d; ++j) U(k, j) = m(k, j) * inv;
    for (int i = k + 1; i < d; ++i)
      for (int j = k + 1; j < d; ++j) m(i, j) = m(i, j) - L(i, k) * pivot * U(k, j);
  }
  IwahoriElement e(ctx);
  // Torus: t_i = d_0 ... d_i, and det = 1 forces d_0 ... d_n = 1.
  auto running = one;
  for (int i = 0; i < d; ++i) {
    running = running * diag[i];
    if (i < d - 1) e.set_torus(i, running);
  }
  if (!running.is_one()) throw Error(ErrorCode::NotFactorizable, "determinant is not 1");
  for (int i : ctx->rs.positives()) {
    const auto& t = ctx->type_a[i];
    const auto x = detail::signed_value(U(t.row, t.col), t.sign);
    if (x.is_zero()) continue;
    e.set_root(i, x);
    detail::apply_elementary_left(U, t.row, t.col, detail::signed_value(-x, t.sign));
  }
  auto negs = ctx->rs.negatives();
  for (auto it = negs.rbegin(); it != negs.rend(); ++it) {
    const auto& t = ctx->type_a[*it];
    const auto x = detail::signed_value(L(t.row, t.col), t.sign);
    if (x.is_zero()) continue;
    e.set_root(*it, x);
    detail::apply_elementary_right(L, t.row, t.col, detail::signed_value(-x, t.sign));
  }
  if (central_source)
    for (int b = ctx->rs.rank(); b < ctx->torus_rank(); ++b) e.set_torus(b, central_source->torus_coord(b));
  return e;
}

namespace detail {

/// The positive root alpha if e is supported on {alpha, -alpha} and its torus
/// part is alpha^vee(t); nullopt otherwise.
inline std::optional<int> sl2_root(const IwahoriElement& e) {
  const auto& rs = e.context()->rs;
  std::optional<int> alpha;
  for (int i : e.root_support()) {
    const int pos = rs.is_positive(i) ? i : rs.negation(i);
    if (alpha && *alpha != pos) return std::nullopt;
    alpha = pos;
  }
  return alpha;
}

/// alpha^vee(t) recovered from the torus coordinates, or nullopt if the torus
/// part is not of that form.
inline std::optional<TruncatedUnramified> sl2_torus(const IwahoriElement& e, int alpha) {
  const auto& ctx = *e.context();
  const auto cc = ctx.rs.coroot_coeffs(alpha);
  std::optional<TruncatedUnramified> t;
  for (int j = 0; j < ctx.rs.rank(); ++j)
    if (cc[j] == 1 || cc[j] == -1) {
      t = cc[j] == 1 ? e.torus_coord(j) : e.torus_coord(j).inv_unit();
      break;
    }
  if (!t) return std::nullopt;
  for (int j = 0; j < ctx.rs.rank(); ++j)
    if (!(IwahoriElement::power_signed(*t, cc[j]) == e.torus_coord(j))) return std::nullopt;
  return t;
}

inline RingMatrix sl2_matrix(const IwahoriElement& e, int alpha, const TruncatedUnramified& t) {
  const auto& ctx = *e.context();
  const auto y = e.root_coord(ctx.rs.negation(alpha)), x = e.root_coord(alpha);
  const auto ti = t.inv_unit();
  RingMatrix m(2, 2, TruncatedUnramified::zero(ctx.ring));
  // [[1,0],[y,1]] diag(t, 1/t) [[1,x],[0,1]]
  m(0, 0) = t;
  m(0, 1) = t * x;
  m(1, 0) = y * t;
  m(1, 1) = y * t * x + ti;
  return m;
}

inline IwahoriElement sl2_from_matrix(const Context& ctx, int alpha, const RingMatrix& m) {
  const auto one = TruncatedUnramified::one(ctx->ring);
  const auto t = m(0, 0);
  if (!t.is_unit() || !(t - one).residue().is_zero()) throw Error(ErrorCode::NotFactorizable, "pivot not 1 mod p");
  const auto ti = t.inv_unit();
  const auto x = m(0, 1) * ti, y = m(1, 0) * ti;
  if (!y.residue().is_zero()) throw Error(ErrorCode::NotFactorizable, "lower entry not divisible by p");
  if (!(m(1, 1) == y * t * x + ti)) throw Error(ErrorCode::NotFactorizable, "determinant is not 1");
  IwahoriElement e(ctx);
  e.set_root(alpha, x);
  e.set_root(ctx->rs.negation(alpha), y);
  const auto cc = ctx->rs.coroot_coeffs(alpha);
  for (int j = 0; j < ctx->rs.rank(); ++j) e.set_torus(j, IwahoriElement::power_signed(t, cc[j]));
  return e;
}

inline void multiply_central(IwahoriElement& out, const IwahoriElement& a, const IwahoriElement& b) {
  const auto& ctx = *out.context();
  for (int k = ctx.rs.rank(); k < ctx.torus_rank(); ++k) out.set_torus(k, a.torus_coord(k) * b.torus_coord(k));
}

enum class Model { TypeA, SL2, Torus };

inline bool pure_torus(const IwahoriElement& e) { return e.root_support().empty(); }

inline Model choose_model(const IwahoriElement& a, const IwahoriElement& b, int& alpha,
                          TruncatedUnramified& ta, TruncatedUnramified& tb) {
  const auto& rs = a.context()->rs;
  if (rs.type() == 'A') return Model::TypeA;
  if (pure_torus(a) && pure_torus(b)) return Model::Torus;
  auto ra = sl2_root(a), rb = sl2_root(b);
  const int root = ra ? *ra : *rb;
  if ((!ra || *ra == root) && (!rb || *rb == root)) {
    auto sa = sl2_torus(a, root), sb = sl2_torus(b, root);
    if (sa && sb) {
      alpha = root;
      ta = *sa;
      tb = *sb;
      return Model::SL2;
    }
  }
  throw Error(ErrorCode::UnsupportedType, "multiplication is implemented for type A and single-root SL2 supports");
}

}  // namespace detail

inline IwahoriElement multiply(const IwahoriElement& a, const IwahoriElement& b) {
  const Context& ctx = a.context();
  int alpha = -1;
  auto ta = TruncatedUnramified::one(ctx->ring), tb = ta;
  IwahoriElement out(ctx);
  const auto model = detail::choose_model(a, b, alpha, ta, tb);
  if (model == detail::Model::TypeA) {
    out = from_type_a_matrix(ctx, to_type_a_matrix(a) * to_type_a_matrix(b));
  } else if (model == detail::Model::Torus) {
    for (int j = 0; j < ctx->rs.rank(); ++j) out.set_torus(j, a.torus_coord(j) * b.torus_coord(j));
  } else {
    out = detail::sl2_from_matrix(ctx, alpha, detail::sl2_matrix(a, alpha, ta) * detail::sl2_matrix(b, alpha, tb));
  }
  detail::multiply_central(out, a, b);
  return out;
}

inline IwahoriElement inverse(const IwahoriElement& a) {
  const Context& ctx = a.context();
  const Ring& ring = ctx->ring;
  IwahoriElement out(ctx);
  if (ctx->rs.type() == 'A') {
    // Invert factor by factor in reverse order.
    const int d = ctx->rs.rank() + 1;
    RingMatrix m = detail::ring_identity(ring, d);
    auto pos = ctx->rs.positives();
    for (auto it = pos.rbegin(); it != pos.rend(); ++it)
      if (!a.root_coord(*it).is_zero()) {
        const auto& t = ctx->type_a[*it];
        detail::apply_elementary_right(m, t.row, t.col, detail::signed_value(-a.root_coord(*it), t.sign));
      }
    const auto diag = detail::type_a_diagonal(a);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = m(i, j) * diag[j].inv_unit();
    auto neg = ctx->rs.negatives();
    for (auto it = neg.rbegin(); it != neg.rend(); ++it)
      if (!a.root_coord(*it).is_zero()) {
        const auto& t = ctx->type_a[*it];
        detail::apply_elementary_right(m, t.row, t.col, detail::signed_value(-a.root_coord(*it), t.sign));
      }
    out = from_type_a_matrix(ctx, m);
  } else if (detail::pure_torus(a)) {
    for (int j = 0; j < ctx->rs.rank(); ++j) out.set_torus(j, a.torus_coord(j).inv_unit());
  } else {
    auto root = detail::sl2_root(a);
    auto t = root ? detail::sl2_torus(a, *root) : std::nullopt;
    if (!t) throw Error(ErrorCode::UnsupportedType, "inverse needs type A or a single-root SL2 support");
    const int alpha = *root;
    RingMatrix m = detail::sl2_matrix(a, alpha, *t);
    RingMatrix inv(2, 2, TruncatedUnramified::zero(ring));
    inv(0, 0) = m(1, 1);
    inv(1, 1) = m(0, 0);
    inv(0, 1) = -m(0, 1);
    inv(1, 0) = -m(1, 0);
    out = detail::sl2_from_matrix(ctx, alpha, inv);
  }
  for (int k = ctx->rs.rank(); k < ctx->torus_rank(); ++k) out.set_torus(k, a.torus_coord(k).inv_unit());
  return out;
}

inline IwahoriElement power(const IwahoriElement& a, std::uint64_t k) {
  IwahoriElement result = IwahoriElement::identity(a.context()), base = a;
  for (; k > 0; k >>= 1) {
    if (k & 1) result = multiply(result, base);
    base = multiply(base, base);
  }
  return result;
}

/// g h g^{-1} h^{-1}.
inline IwahoriElement commutator(const IwahoriElement& g, const IwahoriElement& h) {
  return multiply(multiply(g, h), multiply(inverse(g), inverse(h)));
}

/// A coordinate of an element whose contribution to omega equals a given
/// grade, read as gr(u_gamma(p^{depth+delta} u)) or gr(lambda(1 + p^depth u)).
struct GradedCoordinate {
  bool torus = false;
  int index = 0;  // root index or cocharacter basis index
  int depth = 0;
  Residue residue;
};

/// Readout of the image of e in gr_G(I) for G = scaled/h. Valid only when e
/// lies in I_G; certified when scaled <= h(N-1).
struct GradedReadout {
  bool certifiable = false;
  bool in_filtration = false;
  std::vector<GradedCoordinate> coords;
};

inline GradedReadout graded_readout(const IwahoriElement& e, std::int64_t scaled) {
  const auto& ctx = *e.context();
  GradedReadout out;
  out.certifiable = scaled <= static_cast<std::int64_t>(ctx.h()) * (ctx.ring->N - 1);
  const auto g = coordinate_grades(e);
  out.in_filtration = true;
  const auto one = TruncatedUnramified::one(ctx.ring);
  for (int i = 0; i < ctx.rs.num_roots(); ++i) {
    if (!g.roots[i]) continue;
    if (*g.roots[i] < scaled) out.in_filtration = false;
    if (*g.roots[i] != scaled) continue;
    const int v = e.root_coord(i).valuation().value();
    out.coords.push_back({false, i, v - ctx.rs.delta(i), e.root_coord(i).divided_by_p_power(v).residue()});
  }
  for (int b = 0; b < ctx.torus_rank(); ++b) {
    if (!g.torus[b]) continue;
    if (*g.torus[b] < scaled) out.in_filtration = false;
    if (*g.torus[b] != scaled) continue;
    const auto u = e.torus_coord(b) - one;
    const int v = u.valuation().value();
    out.coords.push_back({true, b, v, u.divided_by_p_power(v).residue()});
  }
  return out;
}

/// Tri-state outcome of a comparison that may need digits beyond p^N.
enum class Certainty { True, False, Uncertified };

inline const char* to_string(Certainty c) {
  switch (c) {
    case Certainty::True: return "true";
    case Certainty::False: return "false";
    case Certainty::Uncertified: return "uncertified";
  }
  return "?";
}

struct Interval {
  std::int64_t lo;
  std::int64_t hi;  // INT64_MAX when unbounded
};

inline Interval as_interval(const OmegaValue& w) {
  return w.exact ? Interval{w.value.scaled, w.value.scaled} : Interval{w.value.scaled, INT64_MAX};
}

/// Is x >= y for every x in a and y in b (True), for none (False)?
inline Certainty certainly_geq(const Interval& a, const Interval& b) {
  if (b.hi != INT64_MAX && a.lo >= b.hi) return Certainty::True;
  if (a.hi != INT64_MAX && a.hi < b.lo) return Certainty::False;
  return Certainty::Uncertified;
}

inline Certainty certainly_equal(const Interval& a, const Interval& b) {
  if (a.lo == a.hi && b.lo == b.hi) return a.lo == b.lo ? Certainty::True : Certainty::False;
  if (a.hi != INT64_MAX && a.hi < b.lo) return Certainty::False;
  if (b.hi != INT64_MAX && b.hi < a.lo) return Certainty::False;
  return Certainty::Uncertified;
}

inline Interval add(const Interval& a, const Interval& b) {
  const auto hi = (a.hi == INT64_MAX || b.hi == INT64_MAX) ? INT64_MAX : a.hi + b.hi;
  return {a.lo + b.lo, hi};
}

inline Interval min_of(const Interval& a, const Interval& b) { return {std::min(a.lo, b.lo), std::min(a.hi, b.hi)}; }

/// Random element with coordinates of random valuation. If `sl2_root` is set
/// the support is restricted to {+-alpha} and alpha^vee.
inline IwahoriElement random_element(const Context& ctx, std::mt19937_64& rng, std::optional<int> sl2_root = std::nullopt) {
  const Ring& ring = ctx->ring;
  const int N = ring->N;
  auto random_unit = [&] {
    std::uniform_int_distribution<std::int64_t> dist(0, ring->pN - 1);
    for (;;) {
      std::vector<std::int64_t> c(ring->f);
      for (auto& x : c) x = dist(rng);
      auto u = TruncatedUnramified::from_coeffs(ring, c);
      if (u.is_unit()) return u;
    }
  };
  auto random_scaled = [&](int min_val) {
    if (rng() % 3 == 0 || min_val >= N) return TruncatedUnramified::zero(ring);
    const int v = min_val + static_cast<int>(rng() % static_cast<std::uint64_t>(N - min_val));
    return random_unit() * p_power_element(ring, v);
  };
  IwahoriElement e(ctx);
  if (sl2_root) {
    const int a = *sl2_root;
    e.set_root(a, random_scaled(0));
    e.set_root(ctx->rs.negation(a), random_scaled(1));
    const auto t = TruncatedUnramified::one(ring) + random_scaled(1);
    const auto cc = ctx->rs.coroot_coeffs(a);
    for (int j = 0; j < ctx->rs.rank(); ++j) e.set_torus(j, IwahoriElement::power_signed(t, cc[j]));
  } else {
    for (int i = 0; i < ctx->rs.num_roots(); ++i) e.set_root(i, random_scaled(ctx->rs.delta(i)));
    for (int b = 0; b < ctx->rs.rank(); ++b) e.set_torus(b, TruncatedUnramified::one(ring) + random_scaled(1));
  }
  for (int b = ctx->rs.rank(); b < ctx->torus_rank(); ++b)
    e.set_torus(b, TruncatedUnramified::one(ring) + random_scaled(1));
  return e;
}

struct AxiomTally {
  long certified_true = 0;
  long certified_false = 0;
  long uncertified = 0;
  void record(Certainty c) {
    if (c == Certainty::True) ++certified_true;
    else if (c == Certainty::False) ++certified_false;
    else ++uncertified;
  }
};

struct AxiomReport {
  long samples = 0;
  AxiomTally lower_bound;    // omega(g) > 1/(p-1)
  AxiomTally identity;       // omega(g) infinite iff g = 1
  AxiomTally ultrametric;    // omega(h^{-1} g) >= min(omega(g), omega(h))
  AxiomTally commutator;     // omega([g,h]) >= omega(g) + omega(h)
  AxiomTally p_power;        // omega(g^p) = omega(g) + 1
  long violations() const {
    return lower_bound.certified_false + identity.certified_false + ultrametric.certified_false +
           commutator.certified_false + p_power.certified_false;
  }
};

/// Lazard's axioms on random pairs, evaluated with interval semantics.
/// Throws AxiomViolation on the first certified counterexample.
inline AxiomReport check_p_valuation_axioms(const Context& ctx, int samples, std::uint64_t seed,
                                            std::optional<int> sl2_root = std::nullopt) {
  std::mt19937_64 rng(seed);
  AxiomReport rep;
  const auto p = ctx->ring->p;
  const int h = ctx->h();
  auto fail = [&](const char* axiom, const IwahoriElement& g, const IwahoriElement& k) {
    return Error(ErrorCode::AxiomViolation,
                 std::string(axiom) + " fails for g=" + g.to_json().dump() + " h=" + k.to_json().dump());
  };
  while (rep.samples < samples) {
    const auto g = random_element(ctx, rng, sl2_root), k = random_element(ctx, rng, sl2_root);
    if (g.is_identity() || k.is_identity()) continue;
    ++rep.samples;
    const auto wg = as_interval(omega(g)), wk = as_interval(omega(k));

    const Certainty lb = (wg.lo * (p - 1) > h) ? Certainty::True : Certainty::Uncertified;
    rep.lower_bound.record(lb);

    const auto should_be_one = multiply(inverse(g), g);
    rep.identity.record(should_be_one.is_identity() ? Certainty::True : Certainty::False);
    if (!should_be_one.is_identity()) throw fail("identity", g, k);

    const auto quotient = multiply(inverse(k), g);
    const auto ultra = certainly_geq(as_interval(omega_or_bound(quotient)), min_of(wg, wk));
    rep.ultrametric.record(ultra);
    if (ultra == Certainty::False) throw fail("ultrametric", g, k);

    const auto comm = certainly_geq(as_interval(omega_or_bound(commutator(g, k))), add(wg, wk));
    rep.commutator.record(comm);
    if (comm == Certainty::False) throw fail("commutator", g, k);

    const auto pp = certainly_equal(as_interval(omega_or_bound(power(g, static_cast<std::uint64_t>(p)))),
                                    add(wg, Interval{h, h}));
    rep.p_power.record(pp);
    if (pp == Certainty::False) throw fail("p-power", g, k);
  }
  return rep;
}

}  // namespace iwahori_gr
