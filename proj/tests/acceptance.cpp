// Acceptance gate: one line per criterion, each with a pinned wall-clock budget.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "iwahori_gr/verify.hpp"

#ifndef IWAHORI_GR_CLI
#error "IWAHORI_GR_CLI must name the iwahori-gr executable"
#endif

using namespace iwahori_gr;

namespace {

struct Failed {
  std::string why;
};

void require(bool cond, const std::string& why) {
  if (!cond) throw Failed{why};
}

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<std::string()> run;
};

Context context(const std::string& label, std::int64_t p, int f, int N, int central = 0) {
  return make_context(RootSystem::build(label), make_ring(p, f, N), central);
}

// m^{n+1} = span{(s - 1) v : v in m^n}, dense elimination on the full group algebra.
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

std::vector<std::size_t> truncated_square_pascal(std::size_t p) {
  std::vector<std::size_t> out(2 * p - 1, 0);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) ++out[i + j];
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string c1_constants() {
  long triples = 0, matrix = 0;
  for (const char* label : {"A1", "A2", "A3", "A4", "B2", "C2", "B3", "C3", "D4", "G2"}) {
    const auto rep = certify_constants(StructureConstants::compute(RootSystem::build(label)));
    require(rep.triples_checked > 0 || RootSystem::build(label).rank() == 1, std::string(label) + ": no triples");
    triples += rep.triples_checked;
    if (label[0] == 'A') {
      require(rep.matrix_model == "SL" + std::to_string(label[1] - '0' + 1), std::string(label) + ": no matrix model");
      require(rep.matrix_checks > 0, std::string(label) + ": matrix model unchecked");
      matrix += rep.matrix_checks;
    }
  }
  return std::to_string(triples) + " Jacobi triples, " + std::to_string(matrix) + " elementary-matrix commutators";
}

std::string c2_axioms() {
  std::ostringstream os;
  for (const char* label : {"A1", "A2"}) {
    const auto rep = check_p_valuation_axioms(context(label, 5, 1, 3), 500, 0);
    require(rep.samples >= 500, std::string(label) + ": too few samples");
    require(rep.violations() == 0, std::string(label) + ": certified violation");
    const long certified = rep.lower_bound.certified_true + rep.identity.certified_true + rep.ultrametric.certified_true +
                           rep.commutator.certified_true + rep.p_power.certified_true;
    require(certified > 0, std::string(label) + ": nothing certified");
    os << label << " " << rep.samples << " samples, " << certified << " certified; ";
  }
  return os.str() + "0 violations";
}

std::string c3_oracle() {
  struct Run {
    const char* label;
    std::int64_t p;
    std::optional<int> sl2;
  };
  std::ostringstream os;
  for (const auto& r : {Run{"A1", 5, std::nullopt}, Run{"A2", 5, std::nullopt}, Run{"C2", 7, 0}, Run{"C2", 7, 1}}) {
    const GradedLieAlgebra g(context(r.label, r.p, 1, 4));
    const auto rep = certify_brackets_against_oracle(g, 300, 3, r.sl2);
    require(rep.compared >= 300, rep.datum + ": only " + std::to_string(rep.compared) + " pairs compared");
    require(rep.nonzero > 0, rep.datum + ": no nonzero brackets");
    os << rep.datum << " " << rep.compared << "; ";
  }
  return os.str() + "0 mismatches";
}

std::string c4_counts() {
  struct Case {
    const char* label;
    std::int64_t p;
    int f, central;
  };
  std::size_t data = 0;
  for (const auto& c : {Case{"A2", 5, 1, 0}, Case{"A1", 5, 2, 0}, Case{"A1", 5, 1, 1}, Case{"A3", 7, 2, 2},
                        Case{"B2", 7, 1, 0}, Case{"C3", 11, 3, 0}, Case{"D4", 11, 1, 0}, Case{"G2", 11, 2, 0}}) {
    const GradedLieAlgebra g(context(c.label, c.p, c.f, 2, c.central));
    const auto& rs = g.context()->rs;
    const auto basis = g.basis(true);
    const std::size_t expected =
        static_cast<std::size_t>(c.f) * static_cast<std::size_t>(rs.num_roots() + rs.rank() + c.central);
    require(basis.size() == expected, std::string(c.label) + ": basis " + std::to_string(basis.size()) +
                                          " != " + std::to_string(expected));
    for (const auto& s : basis)
      for (const auto& t : basis) {
        if (!s.is_root())
          require(g.bracket_symbols(s, t, true).is_zero(), std::string(c.label) + ": torus symbol not central");
        if (s.is_root() && t.is_root() && !rs.is_positive(s.index) && !rs.is_positive(t.index))
          require(g.bracket_symbols(s, t, true).is_zero(), std::string(c.label) + ": negative roots do not commute");
      }
    ++data;
  }
  return std::to_string(data) + " data, A2 f=1 -> 8, A1 f=2 -> 6";
}

std::string c5_generation() {
  struct Case {
    const char* label;
    std::int64_t p;
    int f, central;
  };
  std::size_t data = 0;
  for (const auto& c : {Case{"A2", 5, 1, 0}, Case{"A1", 5, 2, 0}, Case{"A1", 5, 1, 1}, Case{"A3", 7, 2, 2},
                        Case{"B3", 11, 1, 0}, Case{"C2", 7, 1, 0}, Case{"G2", 11, 2, 0}}) {
    const GradedLieAlgebra g(context(c.label, c.p, c.f, 2, c.central));
    const EnvelopingAlgebra U(g);
    const auto cert = U.minimal_generating_set();
    const std::size_t expected = static_cast<std::size_t>(c.f) *
                                 static_cast<std::size_t>(g.context()->rs.rank() + 1 + c.central);
    require(cert.generators.size() == expected, std::string(c.label) + ": generator count");
    require(cert.reached == cert.basis_size, std::string(c.label) + ": closure misses symbols");
    require(cert.minimal, std::string(c.label) + ": not minimal");
    ++data;
  }
  return std::to_string(data) + " data, closure 100%, minimal";
}

std::string c6_quotient() {
  struct Case {
    const char* label;
    std::int64_t p;
    int f, central;
  };
  std::size_t slices = 0;
  for (const auto& c : {Case{"A1", 5, 1, 0}, Case{"A2", 5, 1, 0}, Case{"A1", 5, 2, 0}, Case{"A1", 5, 1, 1},
                        Case{"B2", 7, 1, 0}, Case{"G2", 11, 1, 0}}) {
    const GradedLieAlgebra g(context(c.label, c.p, c.f, 2, c.central));
    const EnvelopingAlgebra U(g);
    const auto q = U.commutative_quotient(2 * g.h());
    require(q.survivors == q.claimed, std::string(c.label) + ": survivors differ from claimed generators");
    require(q.two_sided, std::string(c.label) + ": ideal not two-sided");
    for (const auto& s : q.slices)
      require(s.algebra_dim - s.ideal_dim == s.expected_quotient_dim, std::string(c.label) + ": slice dimension");
    slices += q.slices.size();
  }
  return std::to_string(slices) + " graded slices match the free commutative series";
}

std::string c7_group_algebra() {
  std::ostringstream os;
  {
    const FiniteGroup heis(heisenberg_model(5));
    const AugmentationLadder ladder(heis, 40);
    const auto rep = check_group_ring_identities(ladder, 200, 0);
    require(rep.truncated == 0, "Heisenberg identities truncated");
    os << "identities: Heisenberg " << rep.checks;
  }
  {
    const IwahoriQuotient q(context("A1", 5, 1, 2));
    const auto g = enumerate(q);
    require(g.order() == 625, "A1 quotient order");
    const AugmentationLadder ladder(g, 10);
    const auto rep = check_group_ring_identities(ladder, 200, 1);
    os << ", A1/625 " << rep.checks << "; ";

    const auto cmp = compare_filtrations(q, g, ladder, q.kernel_grade());
    require(cmp.levels.size() == 3 && cmp.all_equal(), "A1 N=2 filtrations differ");
    os << "filtration A1 k=1/2..3/2";
  }
  {
    const IwahoriQuotient q(context("A2", 5, 1, 2), 3);
    const auto g = enumerate(q);
    const AugmentationLadder ladder(g, 3);
    const auto cmp = compare_filtrations(q, g, ladder, q.kernel_grade());
    require(cmp.all_equal(), "A2 N=2 filtrations differ");
    const auto mem = root_and_coroot_memberships(q, g, ladder);
    require(mem.all_members(), "SL3(Z/25) memberships");
    os << ", A2 k=1/3..1; memberships: SL3(Z/25) " << mem.checks.size();
  }
  {
    const IwahoriQuotient q(context("A1", 5, 1, 3), 5);
    const auto g = enumerate(q);
    const AugmentationLadder ladder(g, 3);
    const auto mem = root_and_coroot_memberships(q, g, ladder);
    require(mem.all_members(), "SL2(Z/125) memberships");
    require(check_coroot_commutator_identity(make_ring(5, 1, 3)) == 1, "coroot commutator identity");
    os << ", SL2(Z/125) " << mem.checks.size() << "; ";
  }
  {
    const IwahoriQuotient q(context("A1", 5, 1, 2, 1));
    const auto g = enumerate(q);
    const AugmentationLadder ladder(g, 3);
    const auto cmp = compare_filtrations(q, g, ladder, 2);
    require(cmp.central_counterexample(), "central counterexample did not trigger");
    os << "A1+Z counterexample triggers";
  }
  return os.str();
}

std::string c8_ladder_oracle() {
  std::ostringstream os;
  for (std::int64_t p : {5, 7, 11}) {
    const FiniteGroup g(cyclic_model(p));
    const auto dims = AugmentationLadder(g, 4 * static_cast<int>(p)).graded_dims();
    require(dims == std::vector<std::size_t>(static_cast<std::size_t>(p), 1), "C" + std::to_string(p) + " closed form");
    require(dims == primal_graded_dims(g), "C" + std::to_string(p) + " brute force");
    os << "C" << p << " ";
  }
  for (std::int64_t p : {5, 7}) {
    const FiniteGroup g(elementary_abelian_model(p, 2));
    const auto dims = AugmentationLadder(g, 4 * static_cast<int>(p)).graded_dims();
    require(dims == truncated_square_pascal(static_cast<std::size_t>(p)), "C" + std::to_string(p) + "^2 closed form");
    require(dims == primal_graded_dims(g), "C" + std::to_string(p) + "^2 brute force");
    os << "C" << p << "^2 ";
  }
  return os.str() + "exact";
}

std::string c9_gk_table() {
  std::size_t rows = 0, conflicts = 0;
  for (const char* label : {"A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4", "D4", "F4", "G2"}) {
    const auto rs = RootSystem::build(label);
    for (int f : {1, 2}) {
      const auto row = gk_bounds(rs, f);
      const bool expected = rs.rank() > 1 && std::string(label) != "A2";
      require(row.conflict == expected, std::string(label) + " f=" + std::to_string(f) + ": conflict flag");
      ++rows;
      conflicts += row.conflict;
    }
  }
  return std::to_string(rows) + " rows, " + std::to_string(conflicts) + " conflicts";
}

std::string c10_determinism() {
  const auto dir = std::filesystem::temp_directory_path();
  const auto tag = std::to_string(std::chrono::steady_clock::now().time_since_epoch().count());
  std::vector<std::filesystem::path> outs{dir / ("iwahori_gr_a_" + tag + ".json"), dir / ("iwahori_gr_b_" + tag + ".json")};
  for (const auto& out : outs) {
    const std::string cmd = std::string("\"") + IWAHORI_GR_CLI + "\" verify --type A2 --seed 0 --out \"" +
                            out.string() + "\" 2>/dev/null";
    require(std::system(cmd.c_str()) == 0, "verify run failed");
  }
  const auto a = read_file(outs[0]), b = read_file(outs[1]);
  for (const auto& out : outs) std::filesystem::remove(out);
  require(!a.empty(), "empty report");
  require(a == b, "reports differ");
  return std::to_string(a.size()) + " bytes, identical";
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "structure constants", 30, c1_constants},
      {2, "p-valuation axioms", 60, c2_axioms},
      {3, "bracket oracle", 120, c3_oracle},
      {4, "reduced basis counts", 5, c4_counts},
      {5, "generation", 10, c5_generation},
      {6, "commutative quotient", 30, c6_quotient},
      {7, "group algebra suite", 600, c7_group_algebra},
      {8, "ladder oracle", 5, c8_ladder_oracle},
      {9, "GK table", 1, c9_gk_table},
      {10, "determinism", 60, c10_determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      detail = c.run();
    } catch (const Failed& f) {
      ok = false;
      detail = f.why;
    } catch (const Error& e) {
      ok = false;
      detail = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && secs > c.budget_s) {
      ok = false;
      detail += " (over budget)";
    }
    failures += !ok;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2fs/%.0fs", secs, c.budget_s);
    std::cout << (ok ? "PASS" : "FAIL") << "  " << c.id << "  " << c.name << "  [" << timing << "]  " << detail << "\n";
  }
  return failures == 0 ? 0 : 1;
}
