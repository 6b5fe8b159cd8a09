#pragma once

// End-to-end verification of one datum, the dimension-bound table, and the
// deterministic report and export formats used by the command-line tool.

#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "iwahori_gr/chevalley.hpp"
#include "iwahori_gr/enveloping.hpp"
#include "iwahori_gr/error.hpp"
#include "iwahori_gr/graded_lie.hpp"
#include "iwahori_gr/group_algebra.hpp"
#include "iwahori_gr/iwahori_group.hpp"
#include "iwahori_gr/root_system.hpp"

namespace iwahori_gr {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kReportSchema = "iwahori-gr/verify/1";

struct Datum {
  std::string type_label = "A2";
  std::int64_t p = 0;  // 0 selects the smallest admissible prime
  int f = 1;
  int N = 2;
  int central_rank = 0;
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  int axiom_samples = 200;
  int oracle_samples = 300;
  std::size_t identity_samples = 100;
  std::size_t group_cap = iwahori_gr::group_cap();
};

enum class Status { Pass, Fail, Uncertified };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Uncertified: return "uncertified";
  }
  return "unknown";
}

struct CheckResult {
  std::string name;
  std::string anchor;
  Status status = Status::Pass;
  nlohmann::json detail = nlohmann::json::object();
  std::string witness;
};

struct VerificationReport {
  std::string type_label;
  int rank = 0;
  std::int64_t p = 0;
  int f = 1;
  int N = 2;
  int central_rank = 0;
  std::string convention_id;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  std::size_t count(Status s) const {
    std::size_t n = 0;
    for (const auto& c : checks) n += c.status == s;
    return n;
  }

  int exit_code() const { return count(Status::Fail) == 0 ? 0 : 1; }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["schema"] = kReportSchema;
    j["tool_version"] = kToolVersion;
    j["convention_id"] = convention_id;
    j["seed"] = seed;
    j["datum"] = {{"type", type_label}, {"rank", rank}, {"p", p}, {"f", f}, {"N", N},
                  {"semisimple", central_rank == 0}, {"d_Z", central_rank}};
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
      nlohmann::json e{{"name", c.name}, {"anchor", c.anchor}, {"status", to_string(c.status)}, {"detail", c.detail}};
      if (!c.witness.empty()) e["witness"] = c.witness;
      j["checks"].push_back(e);
    }
    j["summary"] = {{"pass", count(Status::Pass)}, {"fail", count(Status::Fail)}, {"uncertified", count(Status::Uncertified)}};
    return j;
  }
};

inline void check_admissible(const RootSystem& rs, std::int64_t p) {
  if (!is_prime(p)) throw Error(ErrorCode::NonPrime, std::to_string(p) + " is not prime");
  if (p <= rs.coxeter_number() + 1)
    throw Error(ErrorCode::InadmissiblePrime, "p = " + std::to_string(p) + " is not admissible for " + rs.label() +
                                                  ": need p > h + 1 = " + std::to_string(rs.coxeter_number() + 1));
}

struct GKBoundSummary {
  std::string type_label;
  int f = 1;
  int bound = 0;     // f * (|Delta| + 1)
  int expected = 0;  // f * |Phi^-|
  bool conflict = false;

  nlohmann::json to_json() const {
    return {{"type", type_label}, {"f", f}, {"bound", bound}, {"expected", expected}, {"conflict", conflict}};
  }
};

/// Upper bound f(|Delta|+1) on the dimension of the representations in question,
/// against the flag-variety count f|Phi^-|.
inline GKBoundSummary gk_bounds(const RootSystem& rs, int f) {
  if (f < 1) throw Error(ErrorCode::BadDegree, "f must be positive");
  GKBoundSummary s;
  s.type_label = rs.label();
  s.f = f;
  s.bound = f * (rs.rank() + 1);
  s.expected = f * rs.num_positive();
  s.conflict = s.bound < s.expected;
  return s;
}

inline nlohmann::json roots_info(const RootSystem& rs) {
  nlohmann::json j;
  j["type"] = rs.label();
  j["rank"] = rs.rank();
  j["coxeter_number"] = rs.coxeter_number();
  j["num_roots"] = rs.num_roots();
  j["smallest_admissible_prime"] = rs.smallest_admissible_prime();
  j["cartan"] = rs.cartan();
  j["simple"] = nlohmann::json::array();
  for (int k = 0; k < rs.rank(); ++k) j["simple"].push_back(root_label(rs, rs.simple(k)));
  j["roots"] = nlohmann::json::array();
  for (int i = 0; i < rs.num_roots(); ++i)
    j["roots"].push_back({{"root", root_label(rs, i)}, {"height", rs.height(i)}, {"height_class", rs.height_class_of(i)}});
  return j;
}

/// Chevalley commutator constants c_{ij} for every ordered pair with alpha + beta a root.
inline nlohmann::json constants_json(const StructureConstants& sc) {
  const RootSystem& rs = sc.roots();
  nlohmann::json j;
  j["type"] = rs.label();
  j["convention_id"] = sc.convention_id();
  j["pairs"] = nlohmann::json::array();
  for (int a = 0; a < rs.num_roots(); ++a)
    for (int b = 0; b < rs.num_roots(); ++b) {
      if (b == a || b == rs.negation(a) || rs.sum(a, b) < 0) continue;
      nlohmann::json terms = nlohmann::json::array();
      for (const auto& t : sc.terms(a, b))
        terms.push_back({{"i", t.i}, {"j", t.j}, {"root", root_label(rs, t.root)}, {"c", t.c}});
      j["pairs"].push_back({{"alpha", root_label(rs, a)}, {"beta", root_label(rs, b)}, {"N", sc.N(a, b)}, {"terms", terms}});
    }
  return j;
}

/// Plain reduction mod p^N when it fits under the cap, otherwise the largest
/// filtration quotient I / I_{c/h} that does.
inline std::optional<IwahoriQuotient> choose_quotient(const Context& ctx, std::size_t cap) {
  auto fits = [&](const IwahoriQuotient& q) {
    const int e = q.expected_order_exponent();
    return e < 62 && int_pow(ctx->ring->p, e) <= static_cast<std::int64_t>(cap);
  };
  IwahoriQuotient plain(ctx);
  if (fits(plain)) return plain;
  std::optional<IwahoriQuotient> best;
  for (std::int64_t c = 2; c <= plain.kernel_grade(); ++c) {
    try {
      IwahoriQuotient q(ctx, c);
      if (!fits(q)) break;
      best = q;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::PrecisionExceeded) throw;
      break;
    }
  }
  return best;
}

namespace detail {

inline void run_check(VerificationReport& rep, std::string name, std::string anchor,
                      const std::function<nlohmann::json()>& body) {
  CheckResult c{std::move(name), std::move(anchor), Status::Pass, nlohmann::json::object(), ""};
  try {
    c.detail = body();
  } catch (const Error& e) {
    const bool soft = e.code() == ErrorCode::PrecisionExceeded || e.code() == ErrorCode::GroupTooLarge ||
                      e.code() == ErrorCode::UnsupportedType;
    c.status = soft ? Status::Uncertified : Status::Fail;
    c.witness = e.what();
  }
  rep.checks.push_back(std::move(c));
}

}  // namespace detail

/// Runs every check on one datum. Throws InadmissiblePrime before doing any work
/// when p <= h + 1.
inline VerificationReport verify_all(const Datum& d, const VerifyOptions& opt = {}) {
  const RootSystem rs = RootSystem::build(d.type_label);
  const std::int64_t p = d.p ? d.p : rs.smallest_admissible_prime();
  check_admissible(rs, p);
  if (d.N < 2) throw Error(ErrorCode::PrecisionExceeded, "verification needs N >= 2");
  const Context ctx = make_context(rs, make_ring(p, d.f, d.N), d.central_rank);
  const GradedLieAlgebra g(ctx);

  VerificationReport rep;
  rep.type_label = rs.label();
  rep.rank = rs.rank();
  rep.p = p;
  rep.f = d.f;
  rep.N = d.N;
  rep.central_rank = d.central_rank;
  rep.convention_id = ctx->sc.convention_id();
  rep.seed = opt.seed;
  const bool type_a = rs.type() == 'A';

  detail::run_check(rep, "structure_constants", "Chevalley commutator constants: Jacobi identity and matrix model", [&] {
    const auto c = certify_constants(ctx->sc);
    return nlohmann::json{{"triples_checked", c.triples_checked}, {"matrix_model", c.matrix_model},
                          {"matrix_checks", c.matrix_checks}, {"primes_checked", c.primes_checked}};
  });

  detail::run_check(rep, "p_valuation_axioms", "omega is a p-valuation on the Iwahori group", [&] {
    std::optional<int> sl2;
    if (!type_a) sl2 = rs.simple(0);
    const auto a = check_p_valuation_axioms(ctx, opt.axiom_samples, opt.seed, sl2);
    auto tally = [](const AxiomTally& t) {
      return nlohmann::json{{"true", t.certified_true}, {"false", t.certified_false}, {"uncertified", t.uncertified}};
    };
    nlohmann::json j{{"samples", a.samples},
                     {"model", type_a ? "matrix" : "sl2(" + root_label(rs, rs.simple(0)) + ")"},
                     {"lower_bound", tally(a.lower_bound)},
                     {"identity", tally(a.identity)},
                     {"ultrametric", tally(a.ultrametric)},
                     {"commutator", tally(a.commutator)},
                     {"p_power", tally(a.p_power)}};
    if (a.violations() != 0) throw Error(ErrorCode::AxiomViolation, j.dump());
    return j;
  });

  detail::run_check(rep, "reduced_jacobi", "reduced graded Lie algebra: antisymmetry and Jacobi identity", [&] {
    const auto j = check_jacobi_reduced(g);
    return nlohmann::json{{"triples", j.triples}, {"pairs", j.pairs}, {"basis_size", g.basis(true).size()}};
  });

  detail::run_check(rep, "bracket_oracle", "bracket agrees with graded images of group commutators", [&] {
    const int depth = std::max(0, d.N - 2);
    nlohmann::json runs = nlohmann::json::array();
    if (type_a) {
      const auto o = certify_brackets_against_oracle(g, opt.oracle_samples, opt.seed, std::nullopt, depth);
      runs.push_back({{"datum", o.datum}, {"compared", o.compared}, {"skipped", o.skipped}, {"nonzero", o.nonzero}});
    } else {
      for (int j = 0; j < rs.rank(); ++j) {
        const auto o = certify_brackets_against_oracle(g, opt.oracle_samples, opt.seed + static_cast<std::uint64_t>(j), j, depth);
        runs.push_back({{"datum", o.datum}, {"compared", o.compared}, {"skipped", o.skipped}, {"nonzero", o.nonzero}});
      }
    }
    return nlohmann::json{{"runs", runs}};
  });

  const EnvelopingAlgebra U(g);
  detail::run_check(rep, "generation", "Phi_1 roots and central torus twists generate minimally", [&] {
    const auto cert = U.minimal_generating_set();
    const std::size_t expected = static_cast<std::size_t>(d.f) * static_cast<std::size_t>(rs.rank() + 1 + d.central_rank);
    nlohmann::json j{{"generators", cert.generators.size()}, {"expected", expected}, {"reached", cert.reached},
                     {"basis_size", cert.basis_size}, {"minimal", cert.minimal}};
    if (cert.generators.size() != expected || cert.reached != cert.basis_size || !cert.minimal)
      throw Error(ErrorCode::GenerationFailure, j.dump());
    return j;
  });

  detail::run_check(rep, "commutative_quotient", "U(g)/U[g,g] is free commutative on the generators", [&] {
    const auto q = U.commutative_quotient(2 * rs.coxeter_number());
    nlohmann::json slices = nlohmann::json::array();
    for (const auto& s : q.slices)
      slices.push_back({{"grade", s.grade}, {"algebra_dim", s.algebra_dim}, {"ideal_dim", s.ideal_dim},
                        {"quotient_dim", s.expected_quotient_dim}});
    return nlohmann::json{{"grade_bound", q.grade_bound}, {"survivors", q.survivors.size()},
                          {"two_sided", q.two_sided}, {"slices", slices}};
  });

  std::optional<IwahoriQuotient> quotient;
  std::optional<FiniteGroup> group;
  std::optional<AugmentationLadder> ladder;
  auto need_group = [&] {
    if (!type_a) throw Error(ErrorCode::UnsupportedType, "finite quotients use the type-A matrix model");
    if (ladder) return;
    quotient = choose_quotient(ctx, opt.group_cap);
    if (!quotient) throw Error(ErrorCode::GroupTooLarge, "no filtration quotient fits under the group cap");
    group.emplace(enumerate(*quotient, opt.group_cap));
    const auto levels = std::max<std::int64_t>(quotient->kernel_grade(), rs.coxeter_number());
    ladder.emplace(*group, static_cast<int>(levels));
  };

  detail::run_check(rep, "filtration_comparison", "m^{hk} against the omega-monomial filtration", [&] {
    need_group();
    const auto j_max = std::min<std::int64_t>(quotient->kernel_grade(), ladder->top());
    const auto c = compare_filtrations(*quotient, *group, *ladder, j_max);
    auto j = c.to_json();
    if (d.central_rank == 0 && !c.all_equal()) throw Error(ErrorCode::Mismatch, j.dump());
    if (d.central_rank > 0 && !c.central_counterexample()) throw Error(ErrorCode::Mismatch, j.dump());
    j["central_counterexample"] = c.central_counterexample();
    return j;
  });

  detail::run_check(rep, "root_coroot_memberships", "root and coroot elements in the expected powers of m", [&] {
    need_group();
    auto j = root_and_coroot_memberships(*quotient, *group, *ladder).to_json();
    j["coroot_identity_twists"] = check_coroot_commutator_identity(ctx->ring);
    return j;
  });

  detail::run_check(rep, "group_ring_identities", "augmentation-ideal arithmetic in F_p[G]", [&] {
    need_group();
    const auto r = check_group_ring_identities(*ladder, opt.identity_samples, opt.seed);
    return nlohmann::json{{"group", group->name()}, {"samples", r.samples}, {"checks", r.checks}, {"truncated", r.truncated}};
  });

  detail::run_check(rep, "gk_bound", "dimension bound f(|Delta|+1) against f|Phi^-|", [&] {
    return gk_bounds(rs, d.f).to_json();
  });

  return rep;
}

/// Deterministic export artifacts: brackets, constants, quotient, filtration.
inline std::string export_artifact(const std::string& what, const Datum& d, std::size_t cap = group_cap()) {
  const RootSystem rs = RootSystem::build(d.type_label);
  const std::int64_t p = d.p ? d.p : rs.smallest_admissible_prime();
  if (what == "constants") return constants_json(StructureConstants::compute(rs)).dump(2) + "\n";
  check_admissible(rs, p);
  const Context ctx = make_context(rs, make_ring(p, d.f, d.N), d.central_rank);
  if (what == "brackets") {
    const GradedLieAlgebra g(ctx);
    nlohmann::json j{{"type", rs.label()}, {"p", p}, {"f", d.f}, {"basis_size", g.basis(true).size()}, {"table", g.bracket_table()}};
    return j.dump(2) + "\n";
  }
  if (what == "quotient") {
    const GradedLieAlgebra g(ctx);
    const EnvelopingAlgebra U(g);
    const auto q = U.commutative_quotient(2 * rs.coxeter_number());
    nlohmann::json survivors = nlohmann::json::array();
    for (const auto& s : q.survivors) survivors.push_back(g.label(s));
    nlohmann::json j{{"type", rs.label()}, {"p", p}, {"f", d.f}, {"grade_bound", q.grade_bound},
                     {"generators", survivors}, {"relations", U.relations_json()}};
    return j.dump(2) + "\n";
  }
  if (what == "filtration") {
    const auto q = choose_quotient(ctx, cap);
    if (!q) throw Error(ErrorCode::GroupTooLarge, "no filtration quotient fits under the group cap");
    const auto g = enumerate(*q, cap);
    const auto levels = std::max<std::int64_t>(q->kernel_grade(), rs.coxeter_number());
    const AugmentationLadder ladder(g, static_cast<int>(levels));
    return ladder_csv(ladder);
  }
  throw Error(ErrorCode::BadIndex, "unknown export '" + what + "'; expected brackets, constants, quotient or filtration");
}

}  // namespace iwahori_gr
