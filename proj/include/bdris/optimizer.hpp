#pragma once

#include "bdris/config.hpp"
#include "bdris/model.hpp"

#include <optional>
#include <vector>

namespace bdris {

enum class PhaseMode { continuous, discrete };

// Per-outer-iteration diagnostics, written to trace-<id>.csv by the CLI.
struct TraceRow {
    int outer_iter = 0;
    double snr_t = 0.0;       // true weighted SNR at the current phases
    double snr_c = 0.0;
    double snr_r = 0.0;
    double lagrangian = 0.0;  // penalty objective after the iteration's updates
    double res_phi0 = 0.0;    // ||phi0 - phi||
    double res_phi1 = 0.0;    // ||phi1 - phi|| (NaN in continuous mode)
    double res_u = 0.0;       // ||vech(U) - phi|| (NaN for the diagonal baseline)
    double unitarity = 0.0;   // ||Phi^H Phi - I||_F
};

struct Rhos {
    double rho0 = 0.0;
    double rho1 = 0.0;
    double rho2 = 0.0;
};

// Iterates of the alternating solver over the reduced phase vector.
struct OptimizerState {
    ComplexVector phi;   // design phases (unit modulus)
    ComplexVector phi0;  // bilinear-decoupling copy
    std::optional<ComplexVector> phi1; // alphabet-constrained copy (discrete mode)
    ComplexMatrix u;     // unitary latent (symmetric surface only)
    Rhos rho;
    int outer_iter = 0;
};

// [[R, c/2], [c^H/2, 0]] so that phibar = [phi; 1] carries the linear term.
ComplexMatrix homogenize(const ComplexMatrix& r, const ComplexVector& c);

struct UqpResult {
    ComplexVector phases;
    int iterations = 0;
    bool converged = false;
    std::vector<double> objective_trace; // phibar^H A phibar per iteration, non-increasing
};

// Minimize x^H A x over unit-modulus vectors by the shifted power-style
// fixed point x <- exp(j arg((lam_max I - A) x)). Zero rows keep the previous
// phase. A must be Hermitian; start must be unit-modulus.
UqpResult uqp_minimize(const ComplexMatrix& a, const ComplexVector& start,
                       double eps, int max_iters);

// One design-phase update: assemble R and c from the frozen radar form and
// the penalty anchors, run the homogenized UQP warm-started at state.phi,
// de-rotate, truncate.
ComplexVector update_phi(const OptimizerState& st, const LemmaTerms& terms,
                         const ComplexMatrix& qbar0, double beta,
                         double eps, int max_iters);

// Decoupling-phase update against qbarbar(Phi(phi_new)).
ComplexVector update_phi0(const OptimizerState& st, const ComplexVector& phi_new,
                          const ComplexMatrix& qbarbar, double beta,
                          double eps, int max_iters);

struct AlphabetProjection {
    ComplexVector values;     // entries exp(j 2 pi m / M)
    std::vector<int> indices; // chosen m per entry
};

// Per-entry nearest alphabet phase by exhaustive search over m = 0..M-1,
// maximizing cos(2 pi m / M - arg(phi_l)); ties resolve to the smaller m.
AlphabetProjection update_phi1(const ComplexVector& phi, int resolution);

// Unitary latent update: Frobenius-nearest unitary to Phi(phi).
ComplexMatrix update_U(const ComplexVector& phi);

// Penalty objective: -f(phi, phi0) + sum_i rho_i/2 * ||anchor_i - phi||^2.
double lagrangian_value(const OptimizerState& st, const LemmaTerms& terms, double beta);
double lagrangian_value(const OptimizerState& st, const LemmaTerms& terms, double beta,
                        const ComplexMatrix& qbar0);

struct RunOptions {
    std::optional<ComplexMatrix> initial_phi; // symmetric unitary starting surface
    bool collect_trace = true;
};

struct RunResult {
    ComplexMatrix phi;            // deliverable scattering matrix
    ComplexMatrix phi_relaxed;    // unit-modulus iterate as a matrix (equals phi in continuous mode)
    std::vector<int> alphabet_indices; // discrete mode: m per reduced entry
    OptimizerState state;
    std::vector<TraceRow> trace;
    bool converged = false;
    int outer_iterations = 0;
    double unitarity_residual = 0.0; // of the deliverable phi
    double snr_c = 0.0, snr_r = 0.0, snr_t = 0.0; // at the deliverable phi
};

// Penalty-based alternating design of the full symmetric surface.
// Continuous mode drops the alphabet latent; discrete mode requires
// cfg.resolution >= 2 and delivers the alphabet-exact matrix.
RunResult run_algorithm1(const SystemConfig& cfg, const ChannelSet& ch, PhaseMode mode,
                         const RunOptions& options = {});

} // namespace bdris
