// anyonsim command line: build/verify/export anyon theories, enumerate
// braidings, and run the teleportation / superdense-coding protocols.

#include <iostream>

#include <CLI11.hpp>

#include "anyonsim/cli.hpp"

using namespace anyonsim;

namespace {

void add_theory_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--theory", cfg.theory, "built-in theory: ising | ty | ty-z3 | ty-z4");
  cmd->add_option("--n", cfg.n, "rank n of Z_2^n for --theory ty")->check(CLI::Range(1, 4));
  cmd->add_option("--kappa", cfg.kappa, "Frobenius-Schur indicator of q: +1 or -1")
      ->check(CLI::IsMember({1.0, -1.0}));
  cmd->add_option("--in", cfg.in_path, "read the theory from a JSON file instead");
  cmd->add_option("--out", cfg.out_path, "write the JSON report here");
  cmd->add_option("--eps", cfg.eps, "consistency tolerance (default 1e-9)");
}

int finish(const CommandResult& res, const RunConfig& cfg) {
  std::cout << res.summary << "\n";
  if (cfg.out_path.empty() && !res.report.is_null()) std::cout << res.report.dump(2) << "\n";
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "anyonsim: skeletal anyon-model simulator.\n"
      "Exit codes: 0 pass, 1 check failed, 2 parse error, 3 precondition, 4 capability."};
  app.require_subcommand(1);

  RunConfig cfg;

  CLI::App* verify = app.add_subcommand("verify", "consistency report for a theory");
  add_theory_flags(verify, cfg);

  CLI::App* solve = app.add_subcommand("solve", "enumerate braidings of F-data");
  add_theory_flags(solve, cfg);
  solve->add_option("--seed", cfg.seed, "solver seed");
  solve->add_option("--restarts", cfg.restarts, "solver restart budget (default 200)");

  CLI::App* teleport = app.add_subcommand("teleport", "run a teleportation protocol");
  add_theory_flags(teleport, cfg);
  teleport->add_option("--mode", cfg.mode, "braided | braid-free (default braid-free)");
  teleport->add_option("--p", cfg.p, "qubit count for braided mode");
  teleport->add_option("--N", cfg.big_n, "anyon count for braid-free mode (even)");
  teleport->add_option("--seed", cfg.seed, "seed for the sampled run and the input state");
  teleport->add_flag("--sweep", cfg.sweep, "enumerate every forced outcome record");
  teleport->add_option("--restarts", cfg.restarts, "solver restart budget for braided mode");

  CLI::App* sdc = app.add_subcommand("sdc", "run a superdense-coding protocol");
  add_theory_flags(sdc, cfg);
  sdc->add_option("--mode", cfg.mode, "braided | braid-free (default braid-free)");
  sdc->add_option("--seed", cfg.seed, "seed choosing the encoded dits");
  sdc->add_flag("--sweep", cfg.sweep, "encode and decode every dit pair");
  sdc->add_option("--restarts", cfg.restarts, "solver restart budget for braided mode");

  CLI::App* exp = app.add_subcommand("export", "write a built theory as JSON");
  add_theory_flags(exp, cfg);

  CLI::App* imp = app.add_subcommand("import-check", "validate a theory JSON file");
  imp->add_option("--in", cfg.in_path, "theory JSON file")->required();
  imp->add_option("--out", cfg.out_path, "write the JSON report here");
  imp->add_option("--eps", cfg.eps, "consistency tolerance (default 1e-9)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) return finish(cmd_verify(cfg), cfg);
    if (solve->parsed()) return finish(cmd_solve(cfg), cfg);
    if (teleport->parsed()) return finish(cmd_teleport(cfg), cfg);
    if (sdc->parsed()) return finish(cmd_sdc(cfg), cfg);
    if (exp->parsed()) return finish(cmd_export(cfg), cfg);
    if (imp->parsed()) return finish(cmd_import_check(cfg), cfg);
  } catch (const UnsupportedOperationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCapability;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return 0;
}
