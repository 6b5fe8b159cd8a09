#pragma once

// The enveloping algebra of the reduced graded Lie algebra in PBW normal
// form: straightening, graded slices, the minimal generating set, and the
// largest commutative quotient.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "iwahori_gr/error.hpp"
#include "iwahori_gr/graded_lie.hpp"
#include "iwahori_gr/linalg.hpp"

namespace iwahori_gr {

/// Word in symbol indices; a PBW monomial when non-decreasing.
using Word = std::vector<int>;

class PBWElement {
 public:
  explicit PBWElement(std::int64_t p) : p_(p) {}

  std::int64_t p() const { return p_; }
  const std::map<Word, std::int64_t>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(const Word& w, std::int64_t c) {
    c = mod_floor(c, p_);
    if (c == 0) return;
    auto& slot = terms_[w];
    slot = (slot + c) % p_;
    if (slot == 0) terms_.erase(w);
  }
  void add(const PBWElement& o, std::int64_t scale = 1) {
    for (const auto& [w, c] : o.terms_) add(w, c * scale);
  }
  friend bool operator==(const PBWElement& a, const PBWElement& b) { return a.terms_ == b.terms_; }

 private:
  std::int64_t p_;
  std::map<Word, std::int64_t> terms_;
};

struct GeneratingSetCertificate {
  std::vector<BasisSymbol> generators;
  std::size_t basis_size = 0;
  std::size_t reached = 0;           // symbols in the Lie closure of the generators
  std::size_t lowest_slice_dim = 0;  // dim of the grade-1/h slice
  bool minimal = false;              // no generator lies in the closure of the others
};

struct QuotientSlice {
  std::int64_t grade = 0;  // h * grade
  std::size_t algebra_dim = 0;
  std::size_t ideal_dim = 0;
  std::size_t expected_quotient_dim = 0;  // commutative monomials in the claimed generators
};

struct QuotientReport {
  std::vector<BasisSymbol> survivors;  // basis symbols not in J
  std::vector<BasisSymbol> claimed;
  std::vector<QuotientSlice> slices;
  std::int64_t grade_bound = 0;
  bool two_sided = false;
};

class EnvelopingAlgebra {
 public:
  explicit EnvelopingAlgebra(const GradedLieAlgebra& g) : g_(g), symbols_(g.basis(true)) {
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      index_[symbols_[i]] = static_cast<int>(i);
      grades_.push_back(g_.grade(symbols_[i]));
    }
  }

  const GradedLieAlgebra& lie() const { return g_; }
  const std::vector<BasisSymbol>& symbols() const { return symbols_; }
  std::int64_t p() const { return g_.p(); }
  std::int64_t symbol_grade(int i) const { return grades_[i]; }
  int index_of(const BasisSymbol& s) const {
    auto it = index_.find(s);
    if (it == index_.end()) throw Error(ErrorCode::BadIndex, "symbol outside the reduced basis");
    return it->second;
  }

  std::int64_t word_grade(const Word& w) const {
    std::int64_t g = 0;
    for (int i : w) g += grades_[i];
    return g;
  }

  PBWElement one() const {
    PBWElement e(p());
    e.add(Word{}, 1);
    return e;
  }
  PBWElement generator(const BasisSymbol& s) const {
    PBWElement e(p());
    e.add(Word{index_of(s)}, 1);
    return e;
  }
  PBWElement from_lie(const GradedLieElement& x) const {
    PBWElement e(p());
    for (const auto& [s, c] : x.terms()) e.add(Word{index_of(s)}, c);
    return e;
  }

  /// Bracket of two symbols as a combination of symbol indices.
  const std::vector<std::pair<int, std::int64_t>>& symbol_bracket(int a, int b) const {
    const auto key = std::make_pair(a, b);
    auto it = bracket_cache_.find(key);
    if (it != bracket_cache_.end()) return it->second;
    std::vector<std::pair<int, std::int64_t>> out;
    const auto r = g_.bracket_symbols(symbols_[a], symbols_[b], true);
    for (const auto& [s, c] : r.terms()) out.emplace_back(index_of(s), c);
    return bracket_cache_.emplace(key, std::move(out)).first->second;
  }

  /// PBW normal form of an arbitrary word, rewriting the leftmost inversion
  /// xy -> yx + [x, y] first.
  const PBWElement& normal_form(const Word& w) const {
    auto it = nf_cache_.find(w);
    if (it != nf_cache_.end()) return it->second;
    PBWElement out(p());
    std::size_t i = 0;
    while (i + 1 < w.size() && w[i] <= w[i + 1]) ++i;
    if (i + 1 >= w.size()) {
      out.add(w, 1);
    } else {
      rewrite_at(w, i, out, [this](const Word& v) -> const PBWElement& { return normal_form(v); });
    }
    return nf_cache_.emplace(w, std::move(out)).first->second;
  }

  /// Normal form with the rewrite position chosen at random at every step.
  PBWElement normal_form_randomized(const Word& w, std::mt19937_64& rng) const {
    std::vector<std::size_t> inversions;
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
      if (w[i] > w[i + 1]) inversions.push_back(i);
    PBWElement out(p());
    if (inversions.empty()) {
      out.add(w, 1);
      return out;
    }
    const std::size_t i = inversions[rng() % inversions.size()];
    std::vector<PBWElement> keep;
    rewrite_at(w, i, out, [&](const Word& v) -> const PBWElement& {
      keep.push_back(normal_form_randomized(v, rng));
      return keep.back();
    });
    return out;
  }

  PBWElement multiply(const PBWElement& x, const PBWElement& y) const {
    PBWElement out(p());
    for (const auto& [u, c] : x.terms())
      for (const auto& [v, d] : y.terms()) {
        Word w = u;
        w.insert(w.end(), v.begin(), v.end());
        out.add(normal_form(w), c * d);
      }
    return out;
  }

  /// PBW monomials of grade exactly G (h-scaled).
  std::vector<Word> monomials(std::int64_t grade) const {
    std::vector<Word> out;
    Word cur;
    enumerate(grade, 0, cur, out);
    return out;
  }

  std::size_t graded_dimension(std::int64_t grade) const { return monomials(grade).size(); }

  /// Coefficient of t^G in prod_s (1 - t^{grade(s)})^{-1}.
  static std::vector<std::uint64_t> hilbert_series(const std::vector<std::int64_t>& grades, std::int64_t max_grade) {
    std::vector<std::uint64_t> c(max_grade + 1, 0);
    c[0] = 1;
    for (auto g : grades)
      for (std::int64_t k = g; k <= max_grade; ++k) c[k] += c[k - g];
    return c;
  }

  std::vector<BasisSymbol> claimed_generators() const {
    std::vector<BasisSymbol> out;
    const int rank = g_.context()->rs.rank();
    for (const auto& s : symbols_)
      if ((s.is_root() && g_.grade(s) == 1) || (!s.is_root() && s.index >= rank)) out.push_back(s);
    return out;
  }

  /// Lie closure inside the reduced algebra of a set of symbols.
  FpEchelon lie_closure(const std::vector<BasisSymbol>& gens) const {
    const std::size_t D = symbols_.size();
    FpEchelon span(p(), D);
    std::vector<GradedLieElement> elems;
    auto push = [&](const GradedLieElement& x) {
      if (span.insert(to_row(x))) elems.push_back(x);
    };
    for (const auto& s : gens) push(g_.element(s, true));
    for (std::size_t i = 0; i < elems.size(); ++i)
      for (std::size_t j = 0; j <= i; ++j) push(g_.bracket(elems[j], elems[i]));
    return span;
  }

  GeneratingSetCertificate minimal_generating_set() const {
    GeneratingSetCertificate cert;
    cert.generators = claimed_generators();
    cert.basis_size = symbols_.size();
    const auto closure = lie_closure(cert.generators);
    cert.reached = 0;
    std::optional<BasisSymbol> missing;
    for (const auto& s : symbols_) {
      if (closure.contains(to_row(g_.element(s, true))))
        ++cert.reached;
      else if (!missing)
        missing = s;
    }
    if (missing) throw Error(ErrorCode::GenerationFailure, "closure misses " + g_.label(*missing));
    for (const auto& s : symbols_) cert.lowest_slice_dim += g_.grade(s) == 1;
    cert.minimal = true;
    for (std::size_t k = 0; k < cert.generators.size(); ++k) {
      auto rest = cert.generators;
      rest.erase(rest.begin() + static_cast<long>(k));
      if (lie_closure(rest).contains(to_row(g_.element(cert.generators[k], true)))) cert.minimal = false;
    }
    return cert;
  }

  /// Two-sided ideal generated by commutators, per grade slice up to the
  /// bound; checks the quotient is free commutative on the claimed generators.
  QuotientReport commutative_quotient(std::int64_t grade_bound) const {
    QuotientReport rep;
    rep.grade_bound = grade_bound;
    rep.claimed = claimed_generators();
    // Spanning set of the derived algebra [g, g].
    FpEchelon derived_span(p(), symbols_.size());
    std::vector<PBWElement> derived;
    for (std::size_t a = 0; a < symbols_.size(); ++a)
      for (std::size_t b = a + 1; b < symbols_.size(); ++b) {
        const auto r = g_.bracket_symbols(symbols_[a], symbols_[b], true);
        if (!r.is_zero() && derived_span.insert(to_row(r))) derived.push_back(from_lie(r));
      }
    std::vector<std::int64_t> claimed_grades;
    for (const auto& s : rep.claimed) claimed_grades.push_back(g_.grade(s));
    const auto expected = hilbert_series(claimed_grades, grade_bound);

    std::map<std::int64_t, FpEchelon> ideal;
    std::map<std::int64_t, std::vector<Word>> slice_words;
    std::map<std::int64_t, std::map<Word, std::size_t>> slice_index;
    auto slice_of = [&](std::int64_t G) -> FpEchelon& {
      if (!ideal.count(G)) {
        slice_words[G] = monomials(G);
        auto& idx = slice_index[G];
        for (std::size_t k = 0; k < slice_words[G].size(); ++k) idx[slice_words[G][k]] = k;
        ideal.emplace(G, FpEchelon(p(), slice_words[G].size()));
      }
      return ideal.at(G);
    };
    auto row_of = [&](std::int64_t G, const PBWElement& x) {
      FpRow row(slice_words[G].size(), 0);
      for (const auto& [w, c] : x.terms()) row[slice_index[G].at(w)] = static_cast<std::uint8_t>(c);
      return row;
    };
    for (std::int64_t G = 0; G <= grade_bound; ++G) {
      auto& J = slice_of(G);
      for (const auto& d : derived) {
        const auto dg = word_grade(d.terms().begin()->first);
        if (dg > G) continue;
        for (const auto& m : monomials(G - dg)) {
          PBWElement mm(p());
          mm.add(m, 1);
          J.insert(row_of(G, multiply(mm, d)));
        }
      }
      rep.slices.push_back({G, slice_words[G].size(), J.rank(), static_cast<std::size_t>(expected[G])});
    }
    // Right multiplication by each symbol stays inside J.
    rep.two_sided = true;
    for (std::int64_t G = 0; G <= grade_bound; ++G)
      for (std::size_t s = 0; s < symbols_.size(); ++s) {
        const auto G2 = G + grades_[s];
        if (G2 > grade_bound) continue;
        for (const auto& r : ideal.at(G).rows()) {
          PBWElement x(p());
          for (std::size_t k = 0; k < r.size(); ++k)
            if (r[k]) x.add(slice_words[G][k], r[k]);
          if (!ideal.at(G2).contains(row_of(G2, multiply(x, generator(symbols_[s]))))) rep.two_sided = false;
        }
      }
    for (std::size_t s = 0; s < symbols_.size(); ++s) {
      const auto G = grades_[s];
      if (G > grade_bound) continue;
      if (!ideal.at(G).contains(row_of(G, generator(symbols_[s])))) rep.survivors.push_back(symbols_[s]);
    }
    if (rep.survivors != rep.claimed)
      throw Error(ErrorCode::QuotientMismatch, "surviving generators differ from the degree-one and central symbols");
    for (const auto& sl : rep.slices)
      if (sl.algebra_dim - sl.ideal_dim != sl.expected_quotient_dim)
        throw Error(ErrorCode::QuotientMismatch, "quotient slice " + std::to_string(sl.grade) + " has dimension " +
                                                     std::to_string(sl.algebra_dim - sl.ideal_dim) + ", expected " +
                                                     std::to_string(sl.expected_quotient_dim));
    if (!rep.two_sided) throw Error(ErrorCode::QuotientMismatch, "commutator ideal is not closed under right products");
    return rep;
  }

  /// Straightening rules xy -> yx + [x, y] for x after y in the symbol order.
  nlohmann::json relations_json() const {
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t a = 0; a < symbols_.size(); ++a)
      for (std::size_t b = 0; b < a; ++b) {
        nlohmann::json rhs = nlohmann::json::array();
        rhs.push_back({{"word", {g_.label(symbols_[b]), g_.label(symbols_[a])}}, {"coeff", 1}});
        for (const auto& [t, c] : symbol_bracket(static_cast<int>(a), static_cast<int>(b)))
          rhs.push_back({{"word", {g_.label(symbols_[t])}}, {"coeff", c}});
        out.push_back({{"lhs", {g_.label(symbols_[a]), g_.label(symbols_[b])}}, {"rhs", rhs}});
      }
    return out;
  }

  FpRow to_row(const GradedLieElement& x) const {
    FpRow row(symbols_.size(), 0);
    for (const auto& [s, c] : x.terms()) row[index_of(s)] = static_cast<std::uint8_t>(c);
    return row;
  }

 private:
  template <class Recurse>
  void rewrite_at(const Word& w, std::size_t i, PBWElement& out, Recurse&& recurse) const {
    Word swapped = w;
    std::swap(swapped[i], swapped[i + 1]);
    out.add(recurse(swapped));
    for (const auto& [t, c] : symbol_bracket(w[i], w[i + 1])) {
      Word shorter(w.begin(), w.begin() + static_cast<long>(i));
      shorter.push_back(t);
      shorter.insert(shorter.end(), w.begin() + static_cast<long>(i) + 2, w.end());
      out.add(recurse(shorter), c);
    }
  }

  void enumerate(std::int64_t remaining, int start, Word& cur, std::vector<Word>& out) const {
    if (remaining == 0) {
      out.push_back(cur);
      return;
    }
    for (int s = start; s < static_cast<int>(symbols_.size()); ++s) {
      if (grades_[s] > remaining) continue;
      cur.push_back(s);
      enumerate(remaining - grades_[s], s, cur, out);
      cur.pop_back();
    }
  }

  GradedLieAlgebra g_;
  std::vector<BasisSymbol> symbols_;
  std::map<BasisSymbol, int> index_;
  std::vector<std::int64_t> grades_;
  mutable std::map<std::pair<int, int>, std::vector<std::pair<int, std::int64_t>>> bracket_cache_;
  mutable std::map<Word, PBWElement> nf_cache_;
};

}  // namespace iwahori_gr
