#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "iwahori_gr/root_system.hpp"

using namespace iwahori_gr;

namespace {

const std::vector<std::string> kAllTypes = {"A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "B2", "B3", "B4",
                                            "B5", "C2", "C3", "C4", "C5", "D4", "D5", "D6", "D7", "D8", "E6",
                                            "E7", "E8", "F4", "G2"};

// Independent enumeration: close the simple roots under simple reflections
// s_i(v) = v - <v, alpha_i^vee> alpha_i.
std::set<RootVec> weyl_orbit_roots(const IntMatrix& c) {
  const int n = static_cast<int>(c.size());
  std::set<RootVec> seen;
  std::vector<RootVec> stack;
  for (int j = 0; j < n; ++j) {
    RootVec v(n, 0);
    v[j] = 1;
    seen.insert(v);
    stack.push_back(v);
  }
  while (!stack.empty()) {
    RootVec v = stack.back();
    stack.pop_back();
    for (int i = 0; i < n; ++i) {
      std::int64_t pair = 0;
      for (int t = 0; t < n; ++t) pair += v[t] * c[t][i];
      RootVec w = v;
      w[i] -= static_cast<int>(pair);
      if (seen.insert(w).second) stack.push_back(w);
    }
  }
  return seen;
}

std::int64_t cofactor_det(const IntMatrix& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  std::int64_t det = 0;
  for (std::size_t col = 0; col < n; ++col) {
    IntMatrix minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<std::int64_t> row;
      for (std::size_t c = 0; c < n; ++c)
        if (c != col) row.push_back(m[r][c]);
      minor.push_back(row);
    }
    det += (col % 2 ? -1 : 1) * m[0][col] * cofactor_det(minor);
  }
  return det;
}

}  // namespace

TEST(Build, A2Roots) {
  auto rs = RootSystem::build("A2");
  EXPECT_EQ(rs.num_roots(), 6);
  std::set<RootVec> pos;
  for (int i : rs.positives()) pos.insert(rs.root(i));
  EXPECT_EQ(pos, (std::set<RootVec>{{1, 0}, {0, 1}, {1, 1}}));
}

TEST(Build, MatchesWeylOrbitEnumeration) {
  for (const auto& label : kAllTypes) {
    auto rs = RootSystem::build(label);
    std::set<RootVec> mine;
    for (int i = 0; i < rs.num_roots(); ++i) mine.insert(rs.root(i));
    EXPECT_EQ(mine, weyl_orbit_roots(rs.cartan())) << label;
  }
  EXPECT_EQ(RootSystem::build("G2").num_roots(), 12);
}

TEST(Build, RejectsUnsupportedTypes) {
  for (const char* bad : {"A0", "B1", "C1", "D3", "E5", "E9", "F3", "G3", "X2", "A"}) {
    try {
      RootSystem::build(std::string(bad));
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::UnsupportedType) << bad;
    }
  }
}

TEST(Build, TotalOrderRefinesHeightAndNegationWorks) {
  for (const auto& label : kAllTypes) {
    auto rs = RootSystem::build(label);
    for (int i = 0; i + 1 < rs.num_roots(); ++i) {
      EXPECT_LE(rs.height(i), rs.height(i + 1));
      EXPECT_NE(rs.root(i), rs.root(i + 1));
    }
    for (int i = 0; i < rs.num_roots(); ++i) {
      EXPECT_EQ(rs.height(i), std::accumulate(rs.root(i).begin(), rs.root(i).end(), 0));
      EXPECT_EQ(rs.height(rs.negation(i)), -rs.height(i));
      EXPECT_EQ(rs.pairing_roots(i, i), 2);
    }
  }
}

TEST(Coxeter, KnownValuesFromMaximalHeight) {
  const std::map<std::string, int> expected = {{"A1", 2}, {"A2", 3}, {"A4", 5}, {"B3", 6}, {"C3", 6}, {"D4", 6},
                                               {"E6", 12}, {"E7", 18}, {"E8", 30}, {"F4", 12}, {"G2", 6}};
  for (const auto& [label, h] : expected) {
    auto rs = RootSystem::build(label);
    int max_height = 0;
    for (const auto& v : weyl_orbit_roots(rs.cartan())) max_height = std::max(max_height, std::accumulate(v.begin(), v.end(), 0));
    EXPECT_EQ(max_height + 1, h) << label;
    EXPECT_EQ(rs.coxeter_number(), h) << label;
  }
}

TEST(HeightClasses, A2Members) {
  auto rs = RootSystem::build("A2");
  auto label_set = [&](const std::vector<int>& idx) {
    std::set<RootVec> s;
    for (int i : idx) s.insert(rs.root(i));
    return s;
  };
  EXPECT_EQ(label_set(rs.height_class(1).members()), (std::set<RootVec>{{1, 0}, {0, 1}, {-1, -1}}));
  EXPECT_EQ(label_set(rs.height_class(2).members()), (std::set<RootVec>{{1, 1}, {-1, 0}, {0, -1}}));
  EXPECT_THROW(rs.height_class(0), Error);
  EXPECT_THROW(rs.height_class(3), Error);
}

TEST(HeightClasses, PartitionAndSymmetry) {
  for (const auto& label : kAllTypes) {
    auto rs = RootSystem::build(label);
    const int h = rs.coxeter_number();
    std::vector<int> count(rs.num_roots(), 0);
    for (int k = 1; k < h; ++k) {
      auto hc = rs.height_class(k);
      for (int i : hc.members()) {
        ++count[i];
        EXPECT_EQ(rs.height_class_of(rs.negation(i)), h - k);
      }
      for (int i : hc.negative) EXPECT_EQ(rs.height(i) + h, k);
    }
    for (int c : count) EXPECT_EQ(c, 1) << label;
    EXPECT_EQ(static_cast<int>(rs.height_class(1).members().size()), rs.rank() + 1) << label;
  }
}

TEST(AdditionPartner, A2) {
  auto rs = RootSystem::build("A2");
  EXPECT_EQ(rs.root_addition_partner(rs.simple(0)), 1);
  try {
    rs.root_addition_partner(rs.highest_root());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::HighestRoot);
  }
}

TEST(AdditionPartner, ExhaustiveUpToRankFour) {
  for (const auto& label : kAllTypes) {
    auto rs = RootSystem::build(label);
    if (rs.rank() > 4) continue;
    for (int i : rs.positives()) {
      if (i == rs.highest_root()) continue;
      const int j = rs.root_addition_partner(i);
      const int s = rs.sum(i, rs.simple(j));
      ASSERT_GE(s, 0);
      EXPECT_TRUE(rs.is_positive(s));
    }
    for (int i : rs.negatives()) {
      if (i == rs.lowest_root()) continue;
      const int j = rs.negative_root_split(i);
      const int prime = rs.combination(i, 1, rs.simple(j), -1);
      ASSERT_GE(prime, 0);
      EXPECT_FALSE(rs.is_positive(prime));
    }
  }
}

TEST(Admissibility, DeterminantAndPrimeBound) {
  for (const auto& label : kAllTypes) {
    auto rs = RootSystem::build(label);
    EXPECT_EQ(rs.cartan_determinant(), cofactor_det(rs.cartan())) << label;
    for (std::int64_t p = 2; p < 50; ++p) {
      if (!rs.is_admissible(p)) continue;
      EXPECT_NE(rs.cartan_determinant() % p, 0) << label << " p=" << p;
    }
  }
  auto a2 = RootSystem::build("A2");
  EXPECT_EQ(a2.cartan_determinant(), 3);
  EXPECT_TRUE(a2.is_admissible(5));
  EXPECT_FALSE(a2.is_admissible(3));
  EXPECT_EQ(RootSystem::build("G2").smallest_admissible_prime(), 11);
}

TEST(Pairing, SimpleCorootsAndCentralDirections) {
  auto rs = RootSystem::build("A2");
  EXPECT_EQ(rs.pairing_simple_coroot(rs.simple(0), 0), 2);
  EXPECT_EQ(rs.pairing_simple_coroot(rs.simple(0), 1), -1);
  CocharacterLattice lat(rs, 1);
  EXPECT_EQ(lat.rank_T(), 3);
  for (int i = 0; i < rs.num_roots(); ++i) EXPECT_EQ(lat.pairing(i, 2), 0);
  EXPECT_EQ(lat.pairing(rs.simple(1), 0), -1);
}

TEST(Pairing, CorootsAreIntegralAndDual) {
  for (const auto& label : kAllTypes) {
    auto rs = RootSystem::build(label);
    for (int i = 0; i < rs.num_roots(); ++i) {
      auto cc = rs.coroot_coeffs(i);
      EXPECT_EQ(rs.pairing(i, cc), 2);
      for (int j = 0; j < rs.rank(); ++j) EXPECT_EQ(cc[j] * rs.root(i)[j] >= 0, true);
    }
  }
}
