#include "mstab/report.hpp"

#include <cmath>

#include "counterexample_data.hpp"
#include "mstab/error.hpp"
#include "mstab/kernels.hpp"

namespace mstab {

namespace {

Document complex_doc(const Complex& c) { return Document::array({c.real(), c.imag()}); }

Document vector_doc(const Vector& x) {
  Document d = Document::array();
  for (double a : x) d.push_back(a);
  return d;
}

Document matrix_doc(const Matrix& m) {
  Document d = Document::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Document row = Document::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    d.push_back(std::move(row));
  }
  return d;
}

Document optional_doc(const std::optional<double>& x) { return x ? Document(*x) : Document(); }

Document header(const char* command, const ProblemFile& p, const Tolerances& tol) {
  Document d;
  d["command"] = command;
  d["input"] = {{"name", p.name}, {"n", p.h.rows()}};
  d["tolerances"] = to_document(tol);
  d["isa"] = std::string(kernels::isa_name(kernels::active().isa));
  return d;
}

void require_vectors(const ProblemFile& p, const char* what) {
  if (!p.v || !p.w) throw DomainError(std::string(what) + " needs both v and w in the problem file");
}

bool inline_able(const Document& d) {
  if (!d.is_structured()) return true;
  if (d.is_object()) return d.empty();
  for (const auto& x : d)
    if (x.is_structured()) return false;
  return true;
}

std::string scalar_text(const Document& d) {
  if (d.is_null()) return "-";
  if (d.is_string()) return d.get<std::string>();
  return d.dump();
}

std::string inline_text(const Document& d) {
  if (!d.is_structured()) return scalar_text(d);
  if (d.is_object()) return "{}";
  std::string out = "[";
  bool first = true;
  for (const auto& x : d) {
    if (!first) out += ", ";
    first = false;
    out += scalar_text(x);
  }
  return out + "]";
}

void render(std::string& out, const Document& d, std::size_t indent) {
  const std::string pad(indent, ' ');
  if (d.is_object()) {
    for (const auto& [k, v] : d.items()) {
      if (inline_able(v)) {
        out += pad + k + ": " + inline_text(v) + "\n";
      } else {
        out += pad + k + ":\n";
        render(out, v, indent + 2);
      }
    }
  } else if (d.is_array()) {
    for (const auto& x : d) {
      if (inline_able(x)) {
        out += pad + "- " + inline_text(x) + "\n";
      } else {
        out += pad + "-\n";
        render(out, x, indent + 2);
      }
    }
  } else {
    out += pad + scalar_text(d) + "\n";
  }
}

RankOneSystem system_of(const ProblemFile& p, const Tolerances& tol) {
  require_vectors(p, "this command");
  return assemble(build_mmatrix(p.h, tol), *p.v, *p.w, tol);
}

}  // namespace

Document to_document(const Tolerances& tol) {
  Document d;
  d["eig"] = tol.eig;
  d["margin"] = tol.margin;
  d["rank"] = tol.rank;
  d["alg_window"] = tol.alg_window;
  d["nzp"] = tol.nzp;
  d["symmetric"] = tol.symmetric;
  d["eigvec"] = tol.eigvec;
  return d;
}

Document to_document(const Spectrum& s) {
  Document d = Document::array();
  for (const Complex& c : s.values) d.push_back(complex_doc(c));
  return d;
}

Document to_document(const StabilityReport& r) {
  Document d;
  d["verdict"] = verdict_name(r.verdict);
  d["min_real_part"] = r.min_real_part;
  d["witness"] = complex_doc(r.witness);
  d["margin"] = r.margin;
  d["spectrum"] = to_document(r.spectrum);
  if (!r.clauses.empty()) {
    d["guaranteed_strictly_stable"] = r.guaranteed;
    Document fired = Document::array();
    for (const auto& id : r.fired()) fired.push_back(id);
    d["fired"] = std::move(fired);
    Document cl = Document::array();
    for (const ClauseEvidence& c : r.clauses) {
      Document e;
      e["id"] = c.id;
      e["fired"] = c.fired;
      e["detail"] = c.detail;
      if (!c.values.empty()) {
        Document vals;
        for (const auto& [k, v] : c.values) vals[k] = v;
        e["values"] = std::move(vals);
      }
      if (c.matrix) e["matrix"] = matrix_doc(*c.matrix);
      cl.push_back(std::move(e));
    }
    d["clauses"] = std::move(cl);
  }
  return d;
}

Document to_document(const MinorReport& r, bool with_minors) {
  Document d;
  d["n"] = r.n;
  d["count"] = r.minors.size();
  d["min_minor"] = r.min_minor;
  d["tolerance"] = r.tolerance;
  d["classification"] = minor_class_name(r.classification);
  if (with_minors) {
    Document list = Document::array();
    for (const auto& [subset, value] : r.minors) {
      Document idx = Document::array();
      for (std::size_t i : subset) idx.push_back(i + 1);
      list.push_back({{"subset", std::move(idx)}, {"value", value}});
    }
    d["minors"] = std::move(list);
  }
  return d;
}

Document to_document(const DStabilityProbe& p) {
  Document d;
  d["samples_tested"] = p.samples_tested;
  d["refinement_evaluations"] = p.refinement_evaluations;
  d["worst_min_real_part"] = p.worst_min_real_part;
  d["worst_d"] = vector_doc(p.worst_d);
  d["counterexample_found"] = p.counterexample_found;
  d["finding"] = p.counterexample_found ? "counterexample found: D B is not strictly positive stable for worst_d"
                                        : "no counterexample found";
  return d;
}

Document to_document(const SingularMMatrix& m) {
  Document d;
  d["rho"] = m.rho;
  d["irreducible"] = m.irreducible;
  d["geo_mult_zero"] = m.geo_mult_zero;
  d["alg_mult_zero"] = m.alg_mult_zero;
  d["spectrum_a"] = to_document(m.spectrum_a);
  d["z_left"] = m.z_left ? vector_doc(*m.z_left) : Document();
  d["z_right"] = m.z_right ? vector_doc(*m.z_right) : Document();
  return d;
}

std::string render_text(const Document& doc) {
  std::string out;
  render(out, doc, 0);
  return out;
}

Operand default_operand(const ProblemFile& p) { return p.v && p.w ? Operand::B : Operand::H; }

Matrix operand_matrix(const ProblemFile& p, Operand which, const Tolerances& tol) {
  switch (which) {
    case Operand::H:
      return p.h;
    case Operand::A:
      return build_mmatrix(p.h, tol).a;
    case Operand::B:
      return system_of(p, tol).b;
  }
  return p.h;
}

Run analyze(const ProblemFile& p, const Tolerances& tol, std::size_t probe_samples, std::uint64_t seed) {
  Run run;
  Document& d = run.doc;
  d = header("analyze", p, tol);
  const RankOneSystem sys = system_of(p, tol);
  const std::size_t n = sys.size();

  d["mmatrix"] = to_document(sys.base);
  {
    Document pert;
    pert["b"] = matrix_doc(sys.b);
    pert["nzp"] = sys.nzp;
    pert["left_projection"] = optional_doc(sys.left_projection);
    pert["right_projection"] = optional_doc(sys.right_projection);
    pert["symmetric_a"] = sys.symmetric_base;
    pert["alpha"] = optional_doc(sys.alpha);
    pert["tau"] = optional_doc(sys.tau);
    d["perturbation"] = std::move(pert);
  }
  d["stability"] = to_document(classify(sys.b, tol.margin));

  try {
    Document c = to_document(check_criteria(sys, p.k, tol));
    c.erase("spectrum");
    d["criteria"] = std::move(c);
  } catch (const HypothesisError& e) {
    d["criteria"] = {{"skipped", e.what()}};
    run.status = 3;
  }

  Document dstab;
  dstab["note"] = "fired corollary clauses imply D-stability; probe results are sampling evidence only";
  try {
    Document c = to_document(corollary_clauses(sys, tol));
    Document fired = c["fired"];
    Document clauses = c["clauses"];
    dstab["corollary_fired"] = std::move(fired);
    dstab["corollary_clauses"] = std::move(clauses);
  } catch (const HypothesisError& e) {
    dstab["corollary_clauses"] = {{"skipped", e.what()}};
  }
  dstab["probe"] = to_document(d_stability_probe(sys.b, probe_samples, seed));
  dstab["probe"]["seed"] = seed;
  const auto cert = lyapunov_diagonal_search(sys.b);
  dstab["lyapunov_diagonal_certificate"] = cert ? vector_doc(*cert) : Document();
  d["d_stability"] = std::move(dstab);

  if (n <= kMinorGuard)
    d["principal_minors"] = to_document(principal_minors(sys.b), false);
  else
    d["principal_minors"] = {{"skipped", "n exceeds the enumeration guard"}};
  return run;
}

Run spectrum_run(const ProblemFile& p, Operand which, const Tolerances& tol) {
  Run run;
  run.doc = header("spectrum", p, tol);
  run.doc["of"] = which == Operand::H ? "H" : which == Operand::A ? "A" : "B";
  const Matrix m = operand_matrix(p, which, tol);
  const Spectrum s = spectrum(m, tol.eig);
  run.doc["eigenvalues"] = to_document(s);
  run.doc["spectral_radius"] = s.max_abs();
  run.doc["min_real_part"] = s.min_real();
  return run;
}

Run pminors_run(const ProblemFile& p, Operand which, const Tolerances& tol) {
  Run run;
  run.doc = header("pminors", p, tol);
  run.doc["of"] = which == Operand::H ? "H" : which == Operand::A ? "A" : "B";
  run.doc["minors"] = to_document(principal_minors(operand_matrix(p, which, tol)), true);
  return run;
}

Run dstab_run(const ProblemFile& p, Operand which, std::size_t samples, std::uint64_t seed, const Tolerances& tol) {
  Run run;
  run.doc = header("dstab", p, tol);
  run.doc["of"] = which == Operand::H ? "H" : which == Operand::A ? "A" : "B";
  const Matrix m = operand_matrix(p, which, tol);
  run.doc["probe"] = to_document(d_stability_probe(m, samples, seed));
  run.doc["probe"]["seed"] = seed;
  const auto cert = lyapunov_diagonal_search(m);
  run.doc["lyapunov_diagonal_certificate"] = cert ? vector_doc(*cert) : Document();
  return run;
}

Run homotopy_run(const ProblemFile& p, double t_max, int steps, const Tolerances& tol, HomotopyTrace* out) {
  Run run;
  Document& d = run.doc;
  d = header("homotopy", p, tol);
  const RankOneSystem sys = system_of(p, tol);
  HomotopyTrace tr = trace(sys, t_max, steps);
  d["t_max"] = t_max;
  d["steps"] = steps;
  d["min_real_part_start"] = tr.min_real_parts.front();
  d["min_real_part_end"] = tr.min_real_parts.back();
  Document cr = Document::array();
  for (const Crossing& c : tr.crossings)
    cr.push_back({{"t", c.t},
                  {"b", c.b},
                  {"min_real_part", c.min_real_part},
                  {"bracket", c.bracket},
                  {"direction", c.into_instability ? "into instability" : "into stability"}});
  d["crossings"] = std::move(cr);
  try {
    const auto [lo, hi] = crossing_bounds(sys);
    d["crossing_bounds"] = {{"lower", lo}, {"upper", hi}, {"crossing_possible", lo <= hi}};
  } catch (const HypothesisError& e) {
    d["crossing_bounds"] = {{"skipped", e.what()}};
  }
  try {
    d["small_t_stability"] = {{"t0", small_t_stability(sys)}};
  } catch (const HypothesisError& e) {
    d["small_t_stability"] = {{"skipped", e.what()}};
  }
  const auto t1 = large_t_probe(sys, t_max, steps);
  d["large_t_probe"] = {{"t1", t1 ? Document(*t1) : Document()},
                        {"note", t1 ? "empirical: strictly stable at every sampled t above t1"
                                    : "empirical: not strictly stable at t_max"}};
  if (out) *out = std::move(tr);
  return run;
}

Run flow_run(const ProblemFile& p, const Matrix& c, const FlowOptions& opt, double lambda0, const Tolerances& tol,
             Trajectory* out) {
  Run run;
  Document& d = run.doc;
  d = header("flow", p, tol);
  const std::size_t n = p.h.rows();
  FlowState s0{Vector(n, 1.0 / std::sqrt(double(n))), lambda0, 0.0};
  Trajectory tr = integrate(s0, p.h, c, opt);
  const FlowState& last = tr.states.back();
  d["options"] = {{"dt", opt.dt}, {"max_steps", opt.max_steps}, {"conv_tol", opt.conv_tol},
                  {"renormalize", opt.renormalize}, {"lambda0", lambda0}};
  d["c"] = matrix_doc(c);
  d["converged"] = tr.converged;
  d["steps"] = tr.steps;
  d["t"] = last.t;
  d["lambda"] = last.lambda;
  d["z"] = vector_doc(last.z);
  d["residual"] = tr.residual;
  d["max_norm_drift"] = tr.max_norm_drift;
  try {
    const Matrix reduced = reduced_stability_matrix(last.z, last.lambda, p.h, c);
    const StabilityReport r = classify(reduced, tol.margin);
    d["equilibrium"] = {{"reduced_verdict", verdict_name(r.verdict)},
                        {"reduced_spectrum", to_document(r.spectrum)},
                        {"locally_stable", r.verdict == Verdict::StrictlyStable},
                        {"tangent_basis_agrees", equilibrium_stability_equivalence(last.z, last.lambda, p.h, c)}};
  } catch (const HypothesisError& e) {
    d["equilibrium"] = {{"skipped", e.what()}};
  }
  if (out) *out = std::move(tr);
  return run;
}

const std::string& counterexample_json() {
  static const std::string text = data::counterexample_json;
  return text;
}

ProblemFile counterexample_problem() { return parse_problem(counterexample_json()); }

const CVector& counterexample_reference() {
  static const CVector ref{{-0.0093, -0.9949}, {-0.0093, 0.9949}, {1.1377, 0.0},
                           {1.1649, -0.2223},  {1.1649, 0.2223},  {1.3460, 0.0}};
  return ref;
}

Run counterexample_run(const Tolerances& tol) {
  Run run = analyze(counterexample_problem(), tol);
  Document& d = run.doc;
  d["command"] = "counterexample";

  const CVector computed = spectrum(system_of(counterexample_problem(), tol).b, tol.eig).values;
  const double dev = spectrum_distance(computed, counterexample_reference());
  const double rho = d["mmatrix"]["rho"].get<double>();
  const std::string verdict = d["stability"]["verdict"].get<std::string>();
  Document ref = Document::array();
  for (const Complex& c : counterexample_reference()) ref.push_back(complex_doc(c));
  d["reference"] = {{"spectrum", std::move(ref)},
                    {"rho", 1.0},
                    {"max_eigenvalue_deviation", dev},
                    {"rho_deviation", std::abs(rho - 1.0)},
                    {"tolerance", 1e-3}};
  const bool ok = dev <= 1e-3 && std::abs(rho - 1.0) <= 1e-3 && verdict == "Unstable";
  d["reference"]["match"] = ok;
  if (!ok)
    throw TheoryViolation("counterexample regression failed: eigenvalue deviation " + std::to_string(dev) +
                          ", rho " + std::to_string(rho) + ", verdict " + verdict);
  return run;
}

}  // namespace mstab
