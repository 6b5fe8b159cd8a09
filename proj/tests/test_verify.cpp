#include <gtest/gtest.h>

#include <cstdlib>
#include <functional>
#include <optional>

#include "iwahori_gr/verify.hpp"

using namespace iwahori_gr;

namespace {

std::optional<ErrorCode> code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

const CheckResult& find(const VerificationReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c;
  throw std::runtime_error("no check " + name);
}

}  // namespace

TEST(Verify, A2DefaultsAllPass) {
  VerifyOptions opt;
  opt.axiom_samples = 50;
  opt.oracle_samples = 50;
  opt.identity_samples = 20;
  const auto rep = verify_all(Datum{}, opt);
  EXPECT_EQ(rep.p, 5);
  EXPECT_EQ(rep.checks.size(), 10u);
  EXPECT_EQ(rep.count(Status::Pass), 10u);
  EXPECT_EQ(rep.exit_code(), 0);
  const auto j = rep.to_json();
  EXPECT_EQ(j["schema"], kReportSchema);
  EXPECT_EQ(j["datum"]["semisimple"], true);
  EXPECT_EQ(find(rep, "generation").detail["generators"], 3);
}

TEST(Verify, InadmissiblePrimesRejectedUpFront) {
  Datum a2;
  a2.p = 3;
  EXPECT_EQ(code_of([&] { verify_all(a2); }), ErrorCode::InadmissiblePrime);
  Datum g2;
  g2.type_label = "G2";
  g2.p = 5;
  EXPECT_EQ(code_of([&] { verify_all(g2); }), ErrorCode::InadmissiblePrime);
  Datum composite;
  composite.p = 9;
  EXPECT_EQ(code_of([&] { verify_all(composite); }), ErrorCode::NonPrime);
}

TEST(Verify, NonTypeAGroupChecksAreUncertifiedNotFailed) {
  Datum b2;
  b2.type_label = "B2";
  VerifyOptions opt;
  opt.axiom_samples = 30;
  opt.oracle_samples = 30;
  const auto rep = verify_all(b2, opt);
  EXPECT_EQ(rep.count(Status::Fail), 0u);
  EXPECT_EQ(find(rep, "filtration_comparison").status, Status::Uncertified);
  EXPECT_EQ(find(rep, "bracket_oracle").status, Status::Pass);
  EXPECT_EQ(rep.exit_code(), 0);
}

TEST(Verify, ReductiveDatumExpectsCentralCounterexample) {
  Datum d;
  d.type_label = "A1";
  d.central_rank = 1;
  VerifyOptions opt;
  opt.axiom_samples = 30;
  opt.oracle_samples = 30;
  opt.identity_samples = 10;
  const auto rep = verify_all(d, opt);
  const auto& c = find(rep, "filtration_comparison");
  EXPECT_EQ(c.status, Status::Pass);
  EXPECT_EQ(c.detail["central_counterexample"], true);
  EXPECT_EQ(find(rep, "generation").detail["generators"], 3);
}

TEST(Verify, SameSeedSameBytes) {
  VerifyOptions opt;
  opt.axiom_samples = 40;
  opt.oracle_samples = 40;
  opt.identity_samples = 10;
  Datum d;
  d.type_label = "A1";
  EXPECT_EQ(verify_all(d, opt).to_json().dump(), verify_all(d, opt).to_json().dump());
}

TEST(GKBound, Examples) {
  auto a2 = gk_bounds(RootSystem::build("A2"), 1);
  EXPECT_EQ(a2.bound, 3);
  EXPECT_EQ(a2.expected, 3);
  EXPECT_FALSE(a2.conflict);
  auto b2 = gk_bounds(RootSystem::build("B2"), 1);
  EXPECT_EQ(b2.bound, 3);
  EXPECT_EQ(b2.expected, 4);
  EXPECT_TRUE(b2.conflict);
  auto a1 = gk_bounds(RootSystem::build("A1"), 2);
  EXPECT_EQ(a1.bound, 4);
  EXPECT_EQ(a1.expected, 2);
  EXPECT_FALSE(a1.conflict);
}

TEST(Export, BracketTableForA2) {
  Datum d;
  const auto j = nlohmann::json::parse(export_artifact("brackets", d));
  EXPECT_EQ(j["basis_size"], 8);
  EXPECT_EQ(j["table"].size(), 64u);
}

TEST(Export, G2ConstantsReachThree) {
  Datum d;
  d.type_label = "G2";
  const auto j = nlohmann::json::parse(export_artifact("constants", d));
  int biggest = 0;
  std::function<void(const nlohmann::json&)> walk = [&](const nlohmann::json& x) {
    if (x.is_object() && x.contains("c")) biggest = std::max(biggest, std::abs(x["c"].get<int>()));
    if (x.is_structured())
      for (const auto& y : x) walk(y);
  };
  walk(j);
  EXPECT_EQ(biggest, 3);
}

TEST(Export, FiltrationCsvAndUnknownKind) {
  Datum d;
  d.type_label = "A1";
  EXPECT_EQ(export_artifact("filtration", d), "n,dim,codim\n0,1,0\n1,2,1\n2,4,3\n");
  EXPECT_EQ(code_of([&] { export_artifact("nonsense", d); }), ErrorCode::BadIndex);
}
