#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "iwahori_gr/verify.hpp"

namespace {

using namespace iwahori_gr;

int exit_for(const Error& e) {
  std::cerr << "iwahori-gr: " << e.what() << "\n";
  return e.code() == ErrorCode::InadmissiblePrime ? 2 : 1;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write to '" + path + "' failed");
}

void add_datum_options(CLI::App* cmd, Datum& d) {
  cmd->add_option("--type", d.type_label, "Root datum type, e.g. A2, B3, G2")->required();
  cmd->add_option("--p", d.p, "Prime (default: smallest with p > h + 1)");
  cmd->add_option("--f", d.f, "Residue degree")->check(CLI::Range(1, kMaxDegree));
  cmd->add_option("--N", d.N, "p-adic precision")->check(CLI::PositiveNumber);
  cmd->add_option("--reductive", d.central_rank, "Rank d_Z of the central torus")->check(CLI::NonNegativeNumber);
}

// All irreducible types of rank at most 4.
std::vector<std::string> small_types() {
  return {"A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4", "D4", "F4", "G2"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graded Lie algebras of pro-p Iwahori groups: exact checks and reports"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  auto* roots = app.add_subcommand("roots", "Root system data");
  auto* roots_info_cmd = roots->add_subcommand("info", "Roots, heights and Coxeter number");
  std::string roots_type;
  roots_info_cmd->add_option("type", roots_type, "Type label, e.g. A2")->required();
  roots->require_subcommand(1);

  Datum verify_datum;
  VerifyOptions verify_opts;
  std::string verify_out;
  auto* verify = app.add_subcommand("verify", "Run every check on one datum and print a JSON report");
  add_datum_options(verify, verify_datum);
  verify->add_option("--seed", verify_opts.seed, "Random seed");
  verify->add_option("--out", verify_out, "Report path (default: stdout)");

  std::string gk_type;
  int gk_f = 1;
  bool gk_all = false;
  auto* gk = app.add_subcommand("gk", "Dimension bound f(|Delta|+1) against f|Phi^-|");
  gk->add_option("--type", gk_type, "Type label");
  gk->add_option("--f", gk_f, "Residue degree")->check(CLI::PositiveNumber);
  gk->add_flag("--all", gk_all, "Table for every type of rank <= 4 and f in {1, 2}");

  Datum export_datum;
  std::string export_what, export_out;
  auto* exp = app.add_subcommand("export", "Write a deterministic artifact");
  exp->add_option("what", export_what, "brackets | constants | quotient | filtration")
      ->required()
      ->check(CLI::IsMember({"brackets", "constants", "quotient", "filtration"}));
  add_datum_options(exp, export_datum);
  exp->add_option("--out", export_out, "Output path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (roots_info_cmd->parsed()) {
      std::cout << roots_info(RootSystem::build(roots_type)).dump(2) << "\n";
      return 0;
    }
    if (verify->parsed()) {
      const auto rep = verify_all(verify_datum, verify_opts);
      write_output(verify_out, rep.to_json().dump(2) + "\n");
      for (const auto& c : rep.checks)
        std::cerr << to_string(c.status) << "  " << c.name << "  [" << c.anchor << "]\n";
      return rep.exit_code();
    }
    if (gk->parsed()) {
      nlohmann::json out = nlohmann::json::array();
      if (gk_all) {
        for (const auto& t : small_types())
          for (int f : {1, 2}) out.push_back(gk_bounds(RootSystem::build(t), f).to_json());
      } else {
        if (gk_type.empty()) throw Error(ErrorCode::UnsupportedType, "gk needs --type or --all");
        out = gk_bounds(RootSystem::build(gk_type), gk_f).to_json();
      }
      std::cout << out.dump(2) << "\n";
      return 0;
    }
    if (exp->parsed()) {
      write_output(export_out, export_artifact(export_what, export_datum));
      return 0;
    }
  } catch (const Error& e) {
    return exit_for(e);
  }
  return 0;
}
