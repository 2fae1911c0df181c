#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "mstab/flow.hpp"
#include "mstab/homotopy.hpp"
#include "mstab/pmatrix.hpp"
#include "mstab/problem_io.hpp"
#include "mstab/stability.hpp"

namespace mstab {

using Document = nlohmann::ordered_json;

// A finished report and the process exit status it implies
// (0 ok, 3 when the central check was refused on hypotheses).
struct Run {
  Document doc;
  int status = 0;
};

Document to_document(const Tolerances& tol);
Document to_document(const Spectrum& s);
Document to_document(const StabilityReport& r);
Document to_document(const MinorReport& r, bool with_minors);
Document to_document(const DStabilityProbe& p);
Document to_document(const SingularMMatrix& m);

// Indented key: value rendering of a report document.
std::string render_text(const Document& doc);

enum class Operand { H, A, B };
// B when v and w are both present, H otherwise.
Operand default_operand(const ProblemFile& p);
Matrix operand_matrix(const ProblemFile& p, Operand which, const Tolerances& tol);

Run analyze(const ProblemFile& p, const Tolerances& tol, std::size_t probe_samples = 200, std::uint64_t seed = 1);
Run spectrum_run(const ProblemFile& p, Operand which, const Tolerances& tol);
Run pminors_run(const ProblemFile& p, Operand which, const Tolerances& tol);
Run dstab_run(const ProblemFile& p, Operand which, std::size_t samples, std::uint64_t seed, const Tolerances& tol);
Run homotopy_run(const ProblemFile& p, double t_max, int steps, const Tolerances& tol, HomotopyTrace* out = nullptr);
Run flow_run(const ProblemFile& p, const Matrix& c, const FlowOptions& opt, double lambda0, const Tolerances& tol,
             Trajectory* out = nullptr);

// The built-in six-dimensional instance whose perturbed matrix is unstable.
const std::string& counterexample_json();
ProblemFile counterexample_problem();
// Reference spectrum of its B, to four decimals.
const CVector& counterexample_reference();
// analyze() plus a comparison against the reference spectrum; throws
// TheoryViolation when an eigenvalue is off by more than 1e-3, rho(H) is
// off by more than 1e-3 or the verdict is not Unstable.
Run counterexample_run(const Tolerances& tol);

}  // namespace mstab
