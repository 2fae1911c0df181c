// mstab: stability analysis of rank-one perturbations of singular M-matrices.
//
// Exit status: 0 success, 2 usage/parse/domain error, 3 hypotheses unmet,
// 4 internal theory violation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mstab/error.hpp"
#include "mstab/kernels.hpp"
#include "mstab/report.hpp"

namespace {

using namespace mstab;

std::optional<Operand> parse_operand(const std::string& s) {
  if (s == "H") return Operand::H;
  if (s == "A") return Operand::A;
  if (s == "B") return Operand::B;
  return std::nullopt;
}

void write_file(const std::string& path, const std::string& what, auto&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + what + " to " + path);
  writer(out);
  if (!out) throw DomainError("error writing " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stability, D-stability and P-matrix checks for rho(H) I - H + v w^T"};
  app.require_subcommand(1);
  app.fallthrough();

  bool json = false;
  Tolerances tol;
  std::string isa = "auto";
  app.add_flag("--json", json, "Emit the machine-readable report");
  app.add_option("--eig-tol", tol.eig, "QR deflation threshold")->check(CLI::PositiveNumber);
  app.add_option("--margin", tol.margin, "Relative stability band")->check(CLI::NonNegativeNumber);
  app.add_option("--rank-tol", tol.rank, "Relative singular value cutoff")->check(CLI::PositiveNumber);
  app.add_option("--isa", isa, "Kernel variant")->check(CLI::IsMember({"auto", "scalar", "avx2", "neon"}));

  std::string file;
  std::string of;
  std::size_t samples = 0;
  std::uint64_t seed = 1;

  auto* analyze_cmd = app.add_subcommand("analyze", "Full pipeline report");
  analyze_cmd->add_option("FILE", file, "Problem file")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("--samples", samples, "D-stability probe samples")->default_val(200);
  analyze_cmd->add_option("--seed", seed, "Probe seed")->default_val(1);

  auto* spectrum_cmd = app.add_subcommand("spectrum", "Eigenvalues of H, A or B");
  spectrum_cmd->add_option("FILE", file)->required()->check(CLI::ExistingFile);
  spectrum_cmd->add_option("--of", of, "H, A or B (default B when v and w are given)")
      ->check(CLI::IsMember({"H", "A", "B"}));

  auto* pminors_cmd = app.add_subcommand("pminors", "All principal minors");
  pminors_cmd->add_option("FILE", file)->required()->check(CLI::ExistingFile);
  pminors_cmd->add_option("--of", of)->check(CLI::IsMember({"H", "A", "B"}));

  auto* dstab_cmd = app.add_subcommand("dstab", "Random D-stability probe and diagonal Lyapunov search");
  dstab_cmd->add_option("FILE", file)->required()->check(CLI::ExistingFile);
  dstab_cmd->add_option("--samples", samples)->default_val(1000)->check(CLI::PositiveNumber);
  dstab_cmd->add_option("--seed", seed)->default_val(1);
  dstab_cmd->add_option("--of", of)->check(CLI::IsMember({"H", "A", "B"}));

  double t_max = 1.0;
  int steps = 400;
  std::string csv;
  auto* homotopy_cmd = app.add_subcommand("homotopy", "Eigenvalue paths of A + t v w^T");
  homotopy_cmd->add_option("FILE", file)->required()->check(CLI::ExistingFile);
  homotopy_cmd->add_option("--tmax", t_max)->default_val(1.0)->check(CLI::PositiveNumber);
  homotopy_cmd->add_option("--steps", steps)->default_val(400)->check(CLI::Range(2, 1000000));
  homotopy_cmd->add_option("--csv", csv, "Write t,index,re,im,min_real_part");

  FlowOptions flow_opt;
  std::string c_file;
  double lambda0 = 0.0;
  auto* flow_cmd = app.add_subcommand("flow", "Integrate the eigenvector flow from the normalized ones vector");
  flow_cmd->add_option("FILE", file)->required()->check(CLI::ExistingFile);
  flow_cmd->add_option("--C-file", c_file, "Problem file whose H is used as C (default: C block or I)")
      ->check(CLI::ExistingFile);
  flow_cmd->add_option("--dt", flow_opt.dt)->default_val(0.01)->check(CLI::PositiveNumber);
  flow_cmd->add_option("--steps", flow_opt.max_steps)->default_val(100000);
  flow_cmd->add_option("--conv-tol", flow_opt.conv_tol)->default_val(1e-10)->check(CLI::PositiveNumber);
  flow_cmd->add_option("--lambda0", lambda0)->default_val(0.0);
  flow_cmd->add_flag("!--no-renormalize", flow_opt.renormalize, "Keep the raw RK4 iterate");
  flow_cmd->add_option("--csv", csv, "Write t,z1..zn,lambda,residual");

  std::string emit;
  auto* counter_cmd = app.add_subcommand("counterexample", "Analyze the built-in unstable instance");
  counter_cmd->add_option("--emit", emit, "Also write the embedded problem file to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (isa != "auto") {
      const kernels::Isa want = isa == "scalar" ? kernels::Isa::Scalar
                                : isa == "avx2" ? kernels::Isa::Avx2
                                                : kernels::Isa::Neon;
      if (!kernels::select(want)) throw DomainError("kernel variant " + isa + " is not available on this machine");
    }

    Run run;
    if (*analyze_cmd) {
      run = analyze(load_problem(file), tol, samples, seed);
    } else if (*spectrum_cmd || *pminors_cmd || *dstab_cmd) {
      const ProblemFile p = load_problem(file);
      const Operand which = of.empty() ? default_operand(p) : *parse_operand(of);
      if (*spectrum_cmd)
        run = spectrum_run(p, which, tol);
      else if (*pminors_cmd)
        run = pminors_run(p, which, tol);
      else
        run = dstab_run(p, which, samples, seed, tol);
    } else if (*homotopy_cmd) {
      HomotopyTrace tr;
      run = homotopy_run(load_problem(file), t_max, steps, tol, &tr);
      if (!csv.empty()) write_file(csv, "trace", [&](std::ostream& os) { write_csv(os, tr); });
    } else if (*flow_cmd) {
      const ProblemFile p = load_problem(file);
      Matrix c = c_file.empty() ? (p.c ? *p.c : Matrix::identity(p.h.rows())) : load_problem(c_file).h;
      Trajectory tr;
      flow_opt.record_stride = 10;
      run = flow_run(p, c, flow_opt, lambda0, tol, &tr);
      if (!csv.empty()) write_file(csv, "trajectory", [&](std::ostream& os) { write_csv(os, tr, p.h); });
    } else if (*counter_cmd) {
      if (!emit.empty()) write_file(emit, "problem", [](std::ostream& os) { os << counterexample_json(); });
      run = counterexample_run(tol);
    }

    if (json)
      std::cout << run.doc.dump(2) << '\n';
    else
      std::cout << render_text(run.doc);
    return run.status;
  } catch (const Error& e) {
    std::cerr << "mstab: " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "mstab: " << e.what() << '\n';
    return 2;
  }
}
