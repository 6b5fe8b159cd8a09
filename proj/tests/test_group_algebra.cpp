#include <gtest/gtest.h>

#include <cstdlib>
#include <random>
#include <set>

#include "iwahori_gr/group_algebra.hpp"

using namespace iwahori_gr;

namespace {

// m^{n+1} = span{(s - 1) v : v in m^n} by dense elimination.
std::vector<std::size_t> primal_graded_dims(const FiniteGroup& g) {
  const std::size_t G = g.order();
  const auto p = static_cast<std::uint32_t>(g.p());
  FpEchelon current(g.p(), G);
  for (std::size_t x = 1; x < G; ++x) {
    FpRow r(G, 0);
    r[x] = 1;
    r[0] = static_cast<std::uint8_t>(p - 1);
    current.insert(r);
  }
  std::vector<std::size_t> dims{1};
  while (current.rank() > 0) {
    FpEchelon next(g.p(), G);
    for (const auto& v : current.rows())
      for (std::size_t s = 0; s < g.num_generators(); ++s) {
        FpRow w(G, 0);
        for (std::size_t x = 0; x < G; ++x)
          if (v[x]) {
            const std::size_t y = g.left(s, x);
            w[y] = static_cast<std::uint8_t>((w[y] + v[x]) % p);
            w[x] = static_cast<std::uint8_t>((w[x] + p - v[x]) % p);
          }
        next.insert(w);
      }
    dims.push_back(current.rank() - next.rank());
    current = next;
  }
  return dims;
}

std::vector<std::size_t> poly_mul(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::vector<std::size_t> c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

// 1 + t^w + ... + t^{w(p-1)}.
std::vector<std::size_t> geometric(std::size_t p, std::size_t w) {
  std::vector<std::size_t> a(w * (p - 1) + 1, 0);
  for (std::size_t i = 0; i < p; ++i) a[i * w] = 1;
  return a;
}

// Order of the subgroup generated by p-th powers and commutators.
std::size_t frattini_order(const FiniteGroup& g) {
  std::set<std::size_t> gens;
  for (std::size_t x = 0; x < g.order(); ++x) {
    gens.insert(g.power(x, static_cast<std::uint64_t>(g.p())));
    for (std::size_t s = 0; s < g.num_generators(); ++s) gens.insert(g.commutator(x, g.generator(s)));
  }
  std::set<std::size_t> sub{0};
  std::vector<std::size_t> queue{0};
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (auto s : gens) {
      const auto y = g.multiply(s, queue[i]);
      if (sub.insert(y).second) queue.push_back(y);
    }
  return sub.size();
}

Context a_context(int rank, std::int64_t p, int f, int N, int central = 0) {
  return make_context(RootSystem::build("A" + std::to_string(rank)), make_ring(p, f, N), central);
}

GroupModel trivial_model() {
  GroupModel m;
  m.name = "1";
  m.p = 5;
  m.identity = {0};
  m.multiply = [](const GroupKey& a, const GroupKey&) { return a; };
  return m;
}

}  // namespace

TEST(AugmentationLadder, TrivialGroupHasZeroIdeal) {
  FiniteGroup g(trivial_model());
  AugmentationLadder ladder(g, 4);
  EXPECT_TRUE(ladder.complete());
  EXPECT_EQ(ladder.graded_dims(), (std::vector<std::size_t>{1}));
  EXPECT_TRUE(ladder.contains(3, GroupAlgebraElement(g)));
}

TEST(AugmentationLadder, CyclicTruncatedPolynomialRing) {
  for (std::int64_t p : {5, 7, 11}) {
    FiniteGroup g(cyclic_model(p));
    AugmentationLadder ladder(g, 40);
    ASSERT_TRUE(ladder.complete());
    EXPECT_EQ(ladder.graded_dims(), std::vector<std::size_t>(static_cast<std::size_t>(p), 1)) << p;
    EXPECT_EQ(ladder.graded_dims(), primal_graded_dims(g));
  }
}

TEST(AugmentationLadder, ElementaryAbelianPascalRows) {
  for (std::int64_t p : {5, 7}) {
    FiniteGroup g(elementary_abelian_model(p, 2));
    AugmentationLadder ladder(g, 40);
    ASSERT_TRUE(ladder.complete());
    const auto expected = poly_mul(geometric(static_cast<std::size_t>(p), 1), geometric(static_cast<std::size_t>(p), 1));
    EXPECT_EQ(ladder.graded_dims(), expected);
    EXPECT_EQ(expected[static_cast<std::size_t>(p) - 1], static_cast<std::size_t>(p));
    EXPECT_EQ(ladder.graded_dims(), primal_graded_dims(g));
  }
}

TEST(AugmentationLadder, HeisenbergDimensionsAndConservation) {
  FiniteGroup g(heisenberg_model(5));
  ASSERT_EQ(g.order(), 125u);
  AugmentationLadder ladder(g, 40);
  ASSERT_TRUE(ladder.complete());
  const auto dims = ladder.graded_dims();
  EXPECT_EQ(dims, poly_mul(poly_mul(geometric(5, 1), geometric(5, 1)), geometric(5, 2)));
  EXPECT_EQ(dims, primal_graded_dims(g));
  std::size_t total = 0;
  for (auto d : dims) total += d;
  EXPECT_EQ(total, 125u);
}

TEST(AugmentationLadder, SmallIwahoriQuotientMatchesPrimal) {
  const IwahoriQuotient q(a_context(1, 5, 1, 2), 3);
  const auto g = enumerate(q);
  ASSERT_EQ(g.order(), 125u);
  AugmentationLadder ladder(g, 60);
  ASSERT_TRUE(ladder.complete());
  EXPECT_EQ(ladder.graded_dims(), primal_graded_dims(g));
}

TEST(AugmentationLadder, A1IwahoriModP2FrattiniRank) {
  const IwahoriQuotient q(a_context(1, 5, 1, 2));
  const auto g = enumerate(q);
  ASSERT_EQ(g.order(), 625u);
  AugmentationLadder ladder(g, 3);
  EXPECT_EQ(ladder.graded_dims()[1], 2u);
  EXPECT_EQ(g.order() / frattini_order(g), 25u);
}

TEST(AugmentationLadder, MembershipMatchesConstructedProducts) {
  FiniteGroup g(heisenberg_model(5));
  AugmentationLadder ladder(g, 40);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, g.order() - 1);
  for (int t = 0; t < 50; ++t) {
    const int a = 1 + t % 3, b = 1 + t % 4;
    GroupAlgebraElement x = GroupAlgebraElement::basis(g, pick(rng));
    for (int i = 0; i < a; ++i) x = x * GroupAlgebraElement::minus_one(g, pick(rng));
    GroupAlgebraElement y = GroupAlgebraElement::minus_one(g, pick(rng));
    for (int i = 1; i < b; ++i) y = y * GroupAlgebraElement::minus_one(g, pick(rng));
    EXPECT_TRUE(ladder.contains(a, x));
    EXPECT_TRUE(ladder.contains(b, y));
    EXPECT_TRUE(ladder.contains(a + b, x * y));
    EXPECT_GE(ladder.degree(x * y), std::min(a + b, ladder.top()));
  }
}

TEST(AugmentationLadder, CsvExport) {
  FiniteGroup g(cyclic_model(5));
  AugmentationLadder ladder(g, 10);
  EXPECT_EQ(ladder_csv(ladder), "n,dim,codim\n0,1,0\n1,1,1\n2,1,2\n3,1,3\n4,1,4\n");
}

TEST(FiniteGroup, CapIsEnforced) {
  EXPECT_THROW(FiniteGroup(elementary_abelian_model(5, 3), 100), Error);
  try {
    enumerate(IwahoriQuotient(a_context(2, 5, 1, 2)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GroupTooLarge);
  }
  setenv("IWAHORI_GR_GROUP_CAP", "50", 1);
  EXPECT_EQ(group_cap(), 50u);
  try {
    FiniteGroup g(heisenberg_model(5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GroupTooLarge);
  }
  unsetenv("IWAHORI_GR_GROUP_CAP");
  EXPECT_EQ(group_cap(), kDefaultGroupCap);
}

TEST(FiniteGroup, QuotientRequiresTypeA) {
  const auto ctx = make_context(RootSystem::build("C2"), make_ring(7, 1, 2));
  try {
    IwahoriQuotient q(ctx);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedType);
  }
}

TEST(FiniteGroup, CutoffThresholds) {
  const IwahoriQuotient q(a_context(2, 5, 1, 2), 3);
  EXPECT_EQ(q.kernel_grade(), 3);
  EXPECT_EQ(q.expected_order_exponent(), 6);
  const IwahoriQuotient full(a_context(1, 5, 1, 2));
  EXPECT_EQ(full.kernel_grade(), 3);
  EXPECT_EQ(full.expected_order_exponent(), 4);
  EXPECT_THROW(IwahoriQuotient(a_context(1, 5, 1, 2), 6), Error);
}

TEST(GroupRingIdentities, Heisenberg) {
  FiniteGroup g(heisenberg_model(5));
  AugmentationLadder ladder(g, 40);
  const auto rep = check_group_ring_identities(ladder, 200, 0);
  EXPECT_EQ(rep.samples, 200u);
  EXPECT_EQ(rep.truncated, 0u);
}

TEST(GroupRingIdentities, A1IwahoriQuotient) {
  const IwahoriQuotient q(a_context(1, 5, 1, 2));
  const auto g = enumerate(q);
  AugmentationLadder ladder(g, 10);
  const auto rep = check_group_ring_identities(ladder, 200, 1);
  EXPECT_EQ(rep.samples, 200u);
  EXPECT_EQ(rep.checks, 1400u);
}

TEST(AugmentationLadder, PthPowerDepthInCyclicOfOrderP2) {
  GroupModel m = cyclic_model(5);
  m.multiply = [](const GroupKey& a, const GroupKey& b) { return GroupKey{(a[0] + b[0]) % 25}; };
  m.name = "C25";
  FiniteGroup g(m);
  AugmentationLadder ladder(g, 40);
  EXPECT_EQ(ladder.graded_dims().size(), 25u);
  EXPECT_FALSE(ladder.contains(6, GroupAlgebraElement::minus_one(g, g.power(g.generator(0), 5))));
  EXPECT_TRUE(ladder.contains(5, GroupAlgebraElement::minus_one(g, g.power(g.generator(0), 5))));
}

TEST(OmegaFiltration, A1OrderedBasis) {
  const IwahoriQuotient q(a_context(1, 5, 1, 2));
  const auto g = enumerate(q);
  const OrderedBasis basis(q, g);
  ASSERT_EQ(basis.size(), 3u);
  EXPECT_EQ(basis.elements()[0].scaled_omega, 1);
  EXPECT_EQ(basis.elements()[1].scaled_omega, 1);
  EXPECT_EQ(basis.elements()[2].scaled_omega, 2);
  EXPECT_EQ(basis.elements()[0].order * basis.elements()[1].order * basis.elements()[2].order, 625u);
  const OmegaMonomialFiltration w(basis);
  EXPECT_EQ(w.codim(1), 1u);
  EXPECT_EQ(w.codim(2), 3u);
  EXPECT_EQ(w.codim(3), 7u);
}

TEST(OmegaFiltration, MonomialsLieInMatchingPowers) {
  const IwahoriQuotient q(a_context(1, 5, 1, 2));
  const auto g = enumerate(q);
  AugmentationLadder ladder(g, 6);
  const OrderedBasis basis(q, g);
  const OmegaMonomialFiltration w(basis);
  for (const auto& alpha : w.monomials_below(7)) {
    const auto z = w.monomial(alpha);
    const auto tau = basis.weight(alpha);
    EXPECT_TRUE(ladder.contains(static_cast<int>(tau), z));
    if (tau < ladder.top()) {
      EXPECT_FALSE(ladder.contains(static_cast<int>(tau) + 1, z));
    }
  }
}

TEST(OmegaFiltration, A1ComparisonHoldsInCertifiableRange) {
  const IwahoriQuotient q(a_context(1, 5, 1, 2));
  const auto g = enumerate(q);
  AugmentationLadder ladder(g, 3);
  const auto rep = compare_filtrations(q, g, ladder, 3);
  ASSERT_EQ(rep.levels.size(), 3u);
  EXPECT_TRUE(rep.all_equal());
  EXPECT_EQ(rep.levels[2].codim_m, 7u);
  EXPECT_TRUE(rep.central.empty());
  try {
    compare_filtrations(q, g, ladder, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PrecisionExceeded);
  }
}

TEST(OmegaFiltration, A2ComparisonOnFiltrationQuotient) {
  const IwahoriQuotient q(a_context(2, 5, 1, 2), 3);
  const auto g = enumerate(q);
  ASSERT_EQ(g.order(), 15625u);
  AugmentationLadder ladder(g, 3);
  const auto rep = compare_filtrations(q, g, ladder, 3);
  EXPECT_TRUE(rep.all_equal());
  EXPECT_EQ(rep.levels[0].codim_m, 1u);
  EXPECT_EQ(rep.levels[1].codim_m, 4u);
  EXPECT_EQ(rep.levels[2].codim_m, 13u);
}

TEST(OmegaFiltration, CentralTorusBreaksComparison) {
  const IwahoriQuotient q(a_context(1, 5, 1, 2, 1));
  const auto g = enumerate(q);
  ASSERT_EQ(g.order(), 3125u);
  AugmentationLadder ladder(g, 3);
  const auto rep = compare_filtrations(q, g, ladder, 3);
  ASSERT_EQ(rep.central.size(), 1u);
  EXPECT_TRUE(rep.central[0].in_m);
  EXPECT_FALSE(rep.central[0].in_m2);
  EXPECT_TRUE(rep.central_counterexample());
  EXPECT_TRUE(rep.levels[0].equal);
  EXPECT_FALSE(rep.levels[1].equal);
}

TEST(Memberships, SL3ModP2Quotient) {
  const IwahoriQuotient q(a_context(2, 5, 1, 2), 3);
  const auto g = enumerate(q);
  AugmentationLadder ladder(g, 3);
  const auto rep = root_and_coroot_memberships(q, g, ladder);
  EXPECT_TRUE(rep.all_members());
  bool saw_highest = false;
  for (const auto& c : rep.checks)
    if (c.element.rfind("u[1,1]", 0) == 0) {
      saw_highest = true;
      EXPECT_EQ(c.claimed, 2);
      EXPECT_FALSE(c.trivial);
      ASSERT_TRUE(c.sharp.has_value());
      EXPECT_TRUE(*c.sharp);
    }
  EXPECT_TRUE(saw_highest);
}

TEST(Memberships, SL2ModP3Quotient) {
  const IwahoriQuotient q(a_context(1, 5, 1, 3), 5);
  const auto g = enumerate(q);
  ASSERT_EQ(g.order(), 15625u);
  AugmentationLadder ladder(g, 3);
  const auto rep = root_and_coroot_memberships(q, g, ladder);
  EXPECT_TRUE(rep.all_members());
  const auto& coroot = rep.checks.back();
  EXPECT_EQ(coroot.claimed, 2);
  EXPECT_FALSE(coroot.trivial);
  EXPECT_EQ(check_coroot_commutator_identity(make_ring(5, 1, 3)), 1);
  EXPECT_EQ(check_coroot_commutator_identity(make_ring(5, 2, 3)), 2);
}
