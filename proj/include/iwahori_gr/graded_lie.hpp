#pragma once

// The graded Lie algebra gr(I) over F_p[P] and its reduction modulo P, on the
// basis of root symbols gr(u_gamma(p^{n+delta}[xi]^r)) and torus symbols
// gr(lambda(1 + p^m [xi]^r)).

#include <map>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "iwahori_gr/chevalley.hpp"
#include "iwahori_gr/error.hpp"
#include "iwahori_gr/iwahori_group.hpp"
#include "iwahori_gr/padic_ring.hpp"
#include "iwahori_gr/root_system.hpp"

namespace iwahori_gr {

struct BasisSymbol {
  enum class Kind { Root, Torus };
  Kind kind = Kind::Root;
  int index = 0;  // root index, or cocharacter basis index
  int depth = 0;  // n for roots (>= 0), m for torus (>= 1)
  int twist = 0;  // r in 0..f-1

  static BasisSymbol root(int i, int n = 0, int r = 0) { return {Kind::Root, i, n, r}; }
  static BasisSymbol torus(int b, int m = 1, int r = 0) { return {Kind::Torus, b, m, r}; }
  bool is_root() const { return kind == Kind::Root; }

  friend auto operator<=>(const BasisSymbol& a, const BasisSymbol& b) {
    return std::tie(a.kind, a.index, a.depth, a.twist) <=> std::tie(b.kind, b.index, b.depth, b.twist);
  }
  friend bool operator==(const BasisSymbol&, const BasisSymbol&) = default;
};

/// F_p-linear combination of basis symbols; coefficients kept in [1, p-1].
class GradedLieElement {
 public:
  GradedLieElement(std::int64_t p, bool reduced) : p_(p), reduced_(reduced) {}

  static GradedLieElement of(std::int64_t p, bool reduced, const BasisSymbol& s, std::int64_t c = 1) {
    GradedLieElement e(p, reduced);
    e.add(s, c);
    return e;
  }

  std::int64_t p() const { return p_; }
  bool reduced() const { return reduced_; }
  const std::map<BasisSymbol, std::int64_t>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  std::int64_t coefficient(const BasisSymbol& s) const {
    auto it = terms_.find(s);
    return it == terms_.end() ? 0 : it->second;
  }

  void add(const BasisSymbol& s, std::int64_t c) {
    c = mod_floor(c, p_);
    if (c == 0) return;
    auto& slot = terms_[s];
    slot = (slot + c) % p_;
    if (slot == 0) terms_.erase(s);
  }

  GradedLieElement& operator+=(const GradedLieElement& o) {
    check_compatible(o);
    for (const auto& [s, c] : o.terms_) add(s, c);
    return *this;
  }
  GradedLieElement scaled(std::int64_t k) const {
    GradedLieElement out(p_, reduced_);
    for (const auto& [s, c] : terms_) out.add(s, c * k);
    return out;
  }
  friend GradedLieElement operator+(GradedLieElement a, const GradedLieElement& b) { return a += b; }
  friend GradedLieElement operator-(const GradedLieElement& a, const GradedLieElement& b) { return a + b.scaled(-1); }
  friend bool operator==(const GradedLieElement& a, const GradedLieElement& b) {
    return a.reduced_ == b.reduced_ && a.terms_ == b.terms_;
  }

  void check_compatible(const GradedLieElement& o) const {
    if (o.reduced_ != reduced_) throw Error(ErrorCode::MixedReduction, "reduced and unreduced elements mixed");
  }

 private:
  std::int64_t p_;
  bool reduced_;
  std::map<BasisSymbol, std::int64_t> terms_;
};

class GradedLieAlgebra {
 public:
  explicit GradedLieAlgebra(Context ctx) : GradedLieAlgebra(ctx, ctx->sc) {}

  GradedLieAlgebra(Context ctx, StructureConstants sc) : ctx_(std::move(ctx)), sc_(std::move(sc)), field_(ctx_->ring) {
    if (!ctx_->rs.is_admissible(ctx_->ring->p))
      throw Error(ErrorCode::InadmissiblePrime, "need p > h + 1 for " + ctx_->rs.label());
  }

  const Context& context() const { return ctx_; }
  const StructureConstants& constants() const { return sc_; }
  std::int64_t p() const { return ctx_->ring->p; }
  int f() const { return ctx_->ring->f; }
  int h() const { return ctx_->h(); }

  /// h times the grade.
  std::int64_t grade(const BasisSymbol& s) const {
    if (s.is_root()) return static_cast<std::int64_t>(h()) * s.depth + ctx_->rs.height_class_of(s.index);
    return static_cast<std::int64_t>(h()) * s.depth;
  }

  bool is_reduced_symbol(const BasisSymbol& s) const { return s.depth == (s.is_root() ? 0 : 1); }

  void validate(const BasisSymbol& s) const {
    const int limit = s.is_root() ? ctx_->rs.num_roots() : ctx_->torus_rank();
    if (s.index < 0 || s.index >= limit || s.twist < 0 || s.twist >= f() || s.depth < (s.is_root() ? 0 : 1))
      throw Error(ErrorCode::BadIndex, "invalid basis symbol");
  }

  /// Reduced basis (all symbols of grade in (0, 1]) or the unreduced basis up
  /// to h * max_grade, ordered by grade then symbol.
  std::vector<BasisSymbol> basis(bool reduced, std::int64_t max_scaled_grade = 0) const {
    std::vector<BasisSymbol> out;
    const int max_depth = reduced ? 0 : static_cast<int>(max_scaled_grade / h());
    for (int n = 0; n <= max_depth; ++n)
      for (int r = 0; r < f(); ++r) {
        for (int i = 0; i < ctx_->rs.num_roots(); ++i) out.push_back(BasisSymbol::root(i, n, r));
        for (int b = 0; b < ctx_->torus_rank(); ++b) out.push_back(BasisSymbol::torus(b, n + 1, r));
      }
    if (!reduced)
      std::erase_if(out, [&](const BasisSymbol& s) { return grade(s) > max_scaled_grade; });
    std::stable_sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
      return std::make_pair(grade(a), a) < std::make_pair(grade(b), b);
    });
    return out;
  }

  /// Unreduced symbols of a single grade.
  std::vector<BasisSymbol> grade_slice(std::int64_t scaled) const {
    std::vector<BasisSymbol> out;
    for (const auto& s : basis(false, scaled))
      if (grade(s) == scaled) out.push_back(s);
    return out;
  }

  GradedLieElement element(const BasisSymbol& s, bool reduced, std::int64_t c = 1) const {
    validate(s);
    if (reduced && !is_reduced_symbol(s)) throw Error(ErrorCode::ReducedInput, "symbol is not in the reduced basis");
    return GradedLieElement::of(p(), reduced, s, c);
  }

  GradedLieElement bracket_symbols(const BasisSymbol& a, const BasisSymbol& b, bool reduced) const {
    GradedLieElement out(p(), reduced);
    const auto& rs = ctx_->rs;
    const Residue twist = field_.xi_power(a.twist + b.twist);
    auto emit = [&](auto make, std::int64_t coeff) {
      for (int t = 0; t < f(); ++t) {
        const auto sym = make(t);
        if (reduced && grade(sym) > h()) continue;
        out.add(sym, coeff * twist.coeffs[t]);
      }
    };
    if (a.is_root() && b.is_root()) {
      const int al = a.index, be = b.index;
      if (al == be) return out;
      if (rs.negation(al) == be) {
        if (!rs.is_positive(al)) return bracket_symbols(b, a, reduced).scaled(-1);
        // gr(alpha^vee(1 + p^{n+m+1} x y)) split along the simple coroots.
        const auto cc = rs.coroot_coeffs(al);
        for (int j = 0; j < rs.rank(); ++j)
          if (cc[j] != 0)
            emit([&](int t) { return BasisSymbol::torus(j, a.depth + b.depth + 1, t); }, cc[j]);
        return out;
      }
      const int sum = rs.sum(al, be);
      if (sum < 0) return out;
      const int depth = a.depth + b.depth + rs.delta(al) + rs.delta(be) - rs.delta(sum);
      emit([&](int t) { return BasisSymbol::root(sum, depth, t); }, sc_.N(al, be));
      return out;
    }
    if (!a.is_root() && !b.is_root()) return out;
    if (a.is_root()) return bracket_symbols(b, a, reduced).scaled(-1);
    const auto lat = ctx_->lattice();
    const std::int64_t pairing = mod_floor(lat.pairing(b.index, a.index), p());
    if (pairing == 0) return out;
    emit([&](int t) { return BasisSymbol::root(b.index, a.depth + b.depth, t); }, pairing);
    return out;
  }

  GradedLieElement bracket(const GradedLieElement& x, const GradedLieElement& y) const {
    x.check_compatible(y);
    GradedLieElement out(p(), x.reduced());
    for (const auto& [s, c] : x.terms())
      for (const auto& [t, d] : y.terms()) out += bracket_symbols(s, t, x.reduced()).scaled(c * d);
    return out;
  }

  /// P: depth + 1 on every symbol.
  GradedLieElement p_operator(const GradedLieElement& x) const {
    if (x.reduced()) throw Error(ErrorCode::ReducedInput, "P acts on the unreduced algebra");
    GradedLieElement out(p(), false);
    for (const auto& [s, c] : x.terms()) {
      auto shifted = s;
      ++shifted.depth;
      out.add(shifted, c);
    }
    return out;
  }

  /// Group element whose graded image is the symbol.
  IwahoriElement group_element(const BasisSymbol& s) const {
    const Ring& ring = ctx_->ring;
    const auto lift = teichmuller(s.twist, ring);
    if (s.is_root())
      return IwahoriElement::root_element(ctx_, s.index, lift * p_power_element(ring, s.depth + ctx_->rs.delta(s.index)));
    return IwahoriElement::torus_element(ctx_, s.index, TruncatedUnramified::one(ring) + lift * p_power_element(ring, s.depth));
  }

  /// Unreduced element read from the coordinates of g at a given grade.
  GradedLieElement from_readout(const GradedReadout& r) const {
    GradedLieElement out(p(), false);
    for (const auto& c : r.coords)
      for (int t = 0; t < f(); ++t) {
        const auto s = c.torus ? BasisSymbol::torus(c.index, c.depth, t) : BasisSymbol::root(c.index, c.depth, t);
        out.add(s, c.residue.coeffs[t]);
      }
    return out;
  }

  std::string label(const BasisSymbol& s) const {
    if (s.is_root())
      return "u" + root_label(ctx_->rs, s.index) + ":n=" + std::to_string(s.depth) + ":r=" + std::to_string(s.twist);
    return "t(" + ctx_->lattice().basis_label(s.index) + "):m=" + std::to_string(s.depth) + ":r=" + std::to_string(s.twist);
  }

  nlohmann::json to_json(const GradedLieElement& x) const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& [s, c] : x.terms()) j.push_back({{"symbol", label(s)}, {"coeff", c}});
    return j;
  }

  /// JSON array of {left, right, result} over the reduced basis.
  nlohmann::json bracket_table() const {
    nlohmann::json table = nlohmann::json::array();
    const auto b = basis(true);
    for (const auto& x : b)
      for (const auto& y : b)
        table.push_back({{"left", label(x)}, {"right", label(y)}, {"result", to_json(bracket_symbols(x, y, true))}});
    return table;
  }

 private:
  Context ctx_;
  StructureConstants sc_;
  ResidueField field_;
};

struct JacobiReport {
  long triples = 0;
  long pairs = 0;
};

/// Antisymmetry and the Jacobi identity on every basis triple of the reduced
/// algebra. Throws PropertyViolation with the first failing triple.
inline JacobiReport check_jacobi_reduced(const GradedLieAlgebra& g) {
  JacobiReport rep;
  const auto basis = g.basis(true);
  for (const auto& x : basis)
    for (const auto& y : basis) {
      ++rep.pairs;
      if (!(g.bracket_symbols(x, y, true) == g.bracket_symbols(y, x, true).scaled(-1)))
        throw Error(ErrorCode::PropertyViolation, "antisymmetry fails for " + g.label(x) + ", " + g.label(y));
    }
  for (const auto& x : basis) {
    const auto ex = g.element(x, true);
    for (const auto& y : basis) {
      const auto ey = g.element(y, true);
      const auto xy = g.bracket(ex, ey);
      for (const auto& z : basis) {
        const auto ez = g.element(z, true);
        auto total = g.bracket(xy, ez) + g.bracket(g.bracket(ey, ez), ex) + g.bracket(g.bracket(ez, ex), ey);
        ++rep.triples;
        if (!total.is_zero())
          throw Error(ErrorCode::PropertyViolation,
                      "Jacobi fails for " + g.label(x) + ", " + g.label(y) + ", " + g.label(z));
      }
    }
  }
  return rep;
}

struct OracleReport {
  std::string datum;
  long compared = 0;
  long skipped = 0;  // pairs whose bracket grade needs more than N digits
  long nonzero = 0;  // compared pairs with a nonzero bracket
};

/// Compare bracket() against graded images of group commutators on random
/// symbol pairs. With `sl2_simple` set the symbols are restricted to
/// {+-alpha_j, alpha_j^vee}, for which the SL2 model is exact in any type.
inline OracleReport certify_brackets_against_oracle(const GradedLieAlgebra& g, int samples, std::uint64_t seed,
                                                    std::optional<int> sl2_simple = std::nullopt,
                                                    int max_depth = 1) {
  const auto& ctx = g.context();
  const auto& rs = ctx->rs;
  if (rs.type() != 'A' && !sl2_simple)
    throw Error(ErrorCode::UnsupportedType, "oracle needs type A or an SL2 restriction");
  OracleReport rep;
  rep.datum = rs.label() + (sl2_simple ? "/sl2(a" + std::to_string(*sl2_simple + 1) + ")" : "");
  std::mt19937_64 rng(seed);
  auto pick = [&]() {
    const int depth = static_cast<int>(rng() % static_cast<std::uint64_t>(max_depth + 1));
    const int twist = static_cast<int>(rng() % static_cast<std::uint64_t>(g.f()));
    if (sl2_simple) {
      const int a = rs.simple(*sl2_simple);
      switch (rng() % 3) {
        case 0: return BasisSymbol::root(a, depth, twist);
        case 1: return BasisSymbol::root(rs.negation(a), depth, twist);
        default: return BasisSymbol::torus(*sl2_simple, depth + 1, twist);
      }
    }
    const std::uint64_t total = rs.num_roots() + ctx->torus_rank();
    const int k = static_cast<int>(rng() % total);
    if (k < rs.num_roots()) return BasisSymbol::root(k, depth, twist);
    return BasisSymbol::torus(k - rs.num_roots(), depth + 1, twist);
  };
  const long max_attempts = 50L * samples;
  for (long attempt = 0; rep.compared < samples && attempt < max_attempts; ++attempt) {
    const auto a = pick(), b = pick();
    const auto target = g.grade(a) + g.grade(b);
    const auto comm = commutator(g.group_element(a), g.group_element(b));
    const auto readout = graded_readout(comm, target);
    if (!readout.certifiable) {
      ++rep.skipped;
      continue;
    }
    const auto expected = g.bracket_symbols(a, b, false);
    if (!readout.in_filtration || !(g.from_readout(readout) == expected))
      throw Error(ErrorCode::Mismatch, "bracket of " + g.label(a) + " and " + g.label(b) + " disagrees with the commutator " +
                                           comm.to_json().dump() + "; expected " + g.to_json(expected).dump());
    ++rep.compared;
    if (!expected.is_zero()) ++rep.nonzero;
  }
  if (rep.compared < samples)
    throw Error(ErrorCode::PrecisionExceeded, "too few certifiable pairs; raise the precision");
  return rep;
}

}  // namespace iwahori_gr
