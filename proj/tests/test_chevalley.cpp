#include <gtest/gtest.h>

#include "iwahori_gr/chevalley.hpp"

using namespace iwahori_gr;

namespace {

int max_constant(const StructureConstants& sc) {
  const auto& rs = sc.roots();
  int best = 0;
  for (int a = 0; a < rs.num_roots(); ++a)
    for (int b = 0; b < rs.num_roots(); ++b) {
      if (a == b || rs.negation(a) == b) continue;
      for (const auto& t : sc.terms(a, b)) best = std::max(best, std::abs(t.c));
    }
  return best;
}

}  // namespace

TEST(Constants, A2SingleUnitConstant) {
  auto rs = RootSystem::build("A2");
  auto sc = StructureConstants::compute(rs);
  const int a1 = rs.simple(0), a2 = rs.simple(1);
  EXPECT_EQ(std::abs(sc.N(a1, a2)), 1);
  EXPECT_EQ(sc.N(a1, a2), -sc.N(a2, a1));
  EXPECT_EQ(sc.convention_id(), kConventionId);
  // Lexicographic tie-break puts alpha2 = (0,1) before alpha1 = (1,0), so
  // (alpha2, alpha1) is the extraspecial pair and gets +1.
  auto es = sc.extraspecial_pairs();
  ASSERT_EQ(es.size(), 1u);
  EXPECT_EQ(es[0], std::make_pair(a2, a1));
  EXPECT_EQ(sc.N(a2, a1), 1);
}

TEST(Constants, TypeAHasOnlyFirstOrderTerms) {
  for (int n = 1; n <= 5; ++n) {
    auto rs = RootSystem::build('A', n);
    auto sc = StructureConstants::compute(rs);
    for (int a = 0; a < rs.num_roots(); ++a)
      for (int b = 0; b < rs.num_roots(); ++b) {
        if (a == b || rs.negation(a) == b) continue;
        for (const auto& t : sc.terms(a, b)) {
          EXPECT_EQ(t.i, 1);
          EXPECT_EQ(t.j, 1);
          EXPECT_EQ(std::abs(t.c), 1);
        }
      }
  }
}

TEST(Constants, G2ReachesTwoAndThree) {
  auto sc = StructureConstants::compute(RootSystem::build("G2"));
  bool two = false, three = false;
  const auto& rs = sc.roots();
  for (int a = 0; a < rs.num_roots(); ++a)
    for (int b = 0; b < rs.num_roots(); ++b) {
      if (a == b || rs.negation(a) == b) continue;
      for (const auto& t : sc.terms(a, b)) {
        two |= std::abs(t.c) == 2;
        three |= std::abs(t.c) == 3;
      }
    }
  EXPECT_TRUE(two);
  EXPECT_TRUE(three);
  EXPECT_EQ(max_constant(sc), 3);
}

TEST(Constants, AbsoluteValueIsStringLengthPlusOne) {
  for (const char* label : {"B3", "C3", "D4", "F4", "G2"}) {
    auto rs = RootSystem::build(label);
    auto sc = StructureConstants::compute(rs);
    for (int a = 0; a < rs.num_roots(); ++a)
      for (int b = 0; b < rs.num_roots(); ++b)
        if (rs.sum(a, b) >= 0) {
          EXPECT_EQ(std::abs(sc.N(a, b)), rs.string_down(a, b) + 1) << label;
        }
  }
}

TEST(Expansion, A2SingleFactor) {
  auto rs = RootSystem::build("A2");
  auto sc = StructureConstants::compute(rs);
  auto ring = make_ring(5, 1, 3);
  auto x = TruncatedUnramified::from_int(ring, 3), y = TruncatedUnramified::from_int(ring, 7);
  auto ex = commutator_expansion(sc, rs.simple(0), rs.simple(1), x, y);
  ASSERT_EQ(ex.size(), 1u);
  EXPECT_EQ(ex[0].first, rs.highest_root());
  EXPECT_EQ(ex[0].second, TruncatedUnramified::from_int(ring, 21 * sc.N(rs.simple(0), rs.simple(1))));
}

TEST(Expansion, EmptyWhenNothingIsARoot) {
  auto rs = RootSystem::build("A2");
  auto sc = StructureConstants::compute(rs);
  auto ring = make_ring(5, 1, 2);
  auto one = TruncatedUnramified::one(ring);
  EXPECT_TRUE(commutator_expansion(sc, rs.simple(0), rs.highest_root(), one, one).empty());
  try {
    commutator_expansion(sc, rs.simple(0), rs.negation(rs.simple(0)), one, one);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OppositeRoots);
  }
}

TEST(Expansion, C2ShortLongHasTwoFactorsMatchingSp4) {
  auto rs = RootSystem::build("C2");
  auto sc = StructureConstants::compute(rs);
  const int a = rs.simple(0), b = rs.simple(1);
  const auto& ts = sc.terms(a, b);
  ASSERT_EQ(ts.size(), 2u);
  EXPECT_EQ(rs.root(ts[0].root), (RootVec{1, 1}));
  EXPECT_EQ(rs.root(ts[1].root), (RootVec{2, 1}));

  // Independent check in Sp4 with the explicit elementary matrices of the
  // symplectic form: u_a(x) = I + x(E01 - E32), u_b(y) = I + y E13.
  auto mats = sp4_root_matrices(sc);
  auto ua = [&](std::int64_t x) { return int_identity(4) + (elementary(4, 0, 1) - elementary(4, 3, 2)).scaled(x); };
  auto ub = [&](std::int64_t y) { return int_identity(4) + elementary(4, 1, 3).scaled(y); };
  for (auto [x, y] : {std::pair<std::int64_t, std::int64_t>{1, 1}, {2, 3}, {-2, 5}}) {
    IntDense lhs = ua(x) * ub(y) * ua(-x) * ub(-y);
    IntDense rhs = int_identity(4);
    for (const auto& t : ts) {
      std::int64_t coeff = t.c;
      for (int k = 0; k < t.i; ++k) coeff *= x;
      for (int k = 0; k < t.j; ++k) coeff *= y;
      rhs = rhs * (int_identity(4) + mats[t.root].scaled(coeff));
    }
    EXPECT_EQ(lhs, rhs);
  }
}

TEST(Certify, ElementaryMatrixCommutatorInSL3) {
  auto rs = RootSystem::build("A2");
  auto sc = StructureConstants::compute(rs);
  auto entries = type_a_entries(sc);
  const auto& e1 = entries[rs.simple(0)];
  const auto& e2 = entries[rs.simple(1)];
  EXPECT_EQ(e1.row, 0);
  EXPECT_EQ(e1.col, 1);
  EXPECT_EQ(e2.row, 1);
  EXPECT_EQ(e2.col, 2);
  // [I + x E12, I + y E23] = I + xy E13 in 1-based indexing.
  IntDense lhs = (int_identity(3) + elementary(3, 0, 1).scaled(2)) * (int_identity(3) + elementary(3, 1, 2).scaled(5)) *
                 (int_identity(3) + elementary(3, 0, 1).scaled(-2)) * (int_identity(3) + elementary(3, 1, 2).scaled(-5));
  EXPECT_EQ(lhs, int_identity(3) + elementary(3, 0, 2).scaled(10));
  const auto& e3 = entries[rs.highest_root()];
  EXPECT_EQ(e3.sign * sc.N(rs.simple(0), rs.simple(1)), 1);
}

TEST(Certify, AcceptanceTypesPass) {
  for (const char* label : {"A1", "A2", "A3", "A4", "B2", "C2", "B3", "C3", "D4", "G2"}) {
    auto sc = StructureConstants::compute(RootSystem::build(label));
    auto rep = certify_constants(sc);
    EXPECT_GT(rep.triples_checked, 0) << label;
    EXPECT_EQ(rep.primes_checked.size(), 3u);
  }
}

TEST(Certify, FlippedSignIsDetected) {
  for (const char* label : {"A2", "B3", "G2"}) {
    auto rs = RootSystem::build(label);
    auto sc = StructureConstants::compute(rs);
    const int a = rs.simple(0), b = rs.simple(1);
    auto bad = sc.with_flipped_sign(a, b);
    try {
      certify_constants(bad);
      FAIL() << label;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::CertificationFailure);
    }
  }
}

TEST(Certify, ConstantsAreUnitsForAdmissiblePrimes) {
  for (const char* label : {"B3", "G2", "F4"}) {
    auto rs = RootSystem::build(label);
    auto sc = StructureConstants::compute(rs);
    const auto p = rs.smallest_admissible_prime();
    EXPECT_LE(max_constant(sc), 3);
    EXPECT_GT(p, 3);
  }
}
