#include "bdris/optimizer.hpp"

#include "bdris/baselines.hpp"
#include "bdris/errors.hpp"
#include "bdris/rng.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>

namespace bdris {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kUnimodularTol = 1e-9;

ComplexMatrix hermitize(const ComplexMatrix& a) {
    return 0.5 * (a + a.adjoint());
}

void require_unimodular(const ComplexVector& v, const char* what) {
    for (Index i = 0; i < v.size(); ++i)
        if (std::abs(std::abs(v(i)) - 1.0) > kUnimodularTol)
            throw std::invalid_argument(std::string(what) + ": entry " + std::to_string(i) +
                                        " has modulus " + std::to_string(std::abs(v(i))));
}

// Unit-modulus projection; exact zeros map to 1.
ComplexVector unimodular_projection(const ComplexVector& v) {
    ComplexVector out(v.size());
    for (Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v(i));
        out(i) = mag == 0.0 ? Complex(1.0, 0.0) : v(i) / mag;
    }
    return out;
}

double spectral_norm_hermitian(const ComplexMatrix& a) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        return a.norm();
    return std::max(std::abs(es.eigenvalues().minCoeff()), std::abs(es.eigenvalues().maxCoeff()));
}

} // namespace

ComplexMatrix homogenize(const ComplexMatrix& r, const ComplexVector& c) {
    if (r.rows() != r.cols() || r.rows() != c.size())
        throw std::invalid_argument("homogenize: R must be square and match c");
    const Index n = r.rows();
    ComplexMatrix a(n + 1, n + 1);
    a.topLeftCorner(n, n) = r;
    a.topRightCorner(n, 1) = 0.5 * c;
    a.bottomLeftCorner(1, n) = 0.5 * c.adjoint();
    a(n, n) = Complex(0.0, 0.0);
    return a;
}

UqpResult uqp_minimize(const ComplexMatrix& a, const ComplexVector& start,
                       double eps, int max_iters) {
    if (a.rows() != a.cols() || a.rows() != start.size())
        throw std::invalid_argument("uqp_minimize: dimension mismatch");
    if (eps <= 0.0 || max_iters < 1)
        throw std::invalid_argument("uqp_minimize: eps must be positive, max_iters >= 1");
    require_unimodular(start, "uqp_minimize start");

    const double lam = max_eigenvalue_hermitian(a); // validates Hermitian-ness
    const Index n = a.rows();
    const ComplexMatrix abar = lam * ComplexMatrix::Identity(n, n) - a;

    UqpResult res;
    res.phases = start;
    res.objective_trace.reserve(static_cast<std::size_t>(max_iters) + 1);

    ComplexVector x = start;
    for (int s = 0; s < max_iters; ++s) {
        const ComplexVector y = abar * x;
        // x^H A x = lam ||x||^2 - x^H (lam I - A) x, reusing the matvec.
        res.objective_trace.push_back(lam * x.squaredNorm() - x.dot(y).real());
        ComplexVector next(n);
        for (Index i = 0; i < n; ++i) {
            const double mag = std::abs(y(i));
            next(i) = mag == 0.0 ? x(i) : y(i) / mag;
        }
        const double step = (next - x).norm();
        x = next;
        res.iterations = s + 1;
        if (step <= eps) {
            res.converged = true;
            break;
        }
    }
    res.objective_trace.push_back(lam * x.squaredNorm() - x.dot(abar * x).real());
    res.phases = x;

#ifndef NDEBUG
    for (std::size_t s = 1; s < res.objective_trace.size(); ++s)
        assert(res.objective_trace[s] <= res.objective_trace[s - 1] +
                                             1e-9 * (1.0 + std::abs(res.objective_trace[s - 1])));
#endif
    return res;
}

namespace {

// Shared tail of both phase updates: homogenize, warm-start, solve,
// de-rotate the auxiliary entry to 1, truncate.
ComplexVector solve_phase_block(const ComplexMatrix& r, const ComplexVector& c,
                                const ComplexVector& warm, double eps, int max_iters) {
    const Index n = warm.size();
    ComplexVector start(n + 1);
    start.head(n) = warm;
    start(n) = Complex(1.0, 0.0);
    const UqpResult res = uqp_minimize(homogenize(r, c), start, eps, max_iters);
    const Complex tail = res.phases(n);
    const Complex rot = std::conj(tail) / std::abs(tail);
    return (res.phases * rot).head(n);
}

} // namespace

ComplexVector update_phi(const OptimizerState& st, const LemmaTerms& terms,
                         const ComplexMatrix& qbar0, double beta,
                         double eps, int max_iters) {
    // Minimize -f plus penalty cross terms; the squared-norm pieces are
    // constant on the unit-modulus set and drop out of R and c.
    const ComplexMatrix r = hermitize(-beta * qbar0 + (beta - 1.0) * terms.q_tilde);
    ComplexVector c = 2.0 * (beta - 1.0) * terms.q - st.rho.rho0 * st.phi0;
    if (st.phi1)
        c -= st.rho.rho1 * *st.phi1;
    if (st.u.size() > 0)
        c -= st.rho.rho2 * vech(st.u);
    return solve_phase_block(r, c, st.phi, eps, max_iters);
}

ComplexVector update_phi0(const OptimizerState& st, const ComplexVector& phi_new,
                          const ComplexMatrix& qbarbar, double beta,
                          double eps, int max_iters) {
    const ComplexMatrix r = hermitize(-beta * qbarbar);
    const ComplexVector c = -st.rho.rho0 * phi_new;
    return solve_phase_block(r, c, st.phi0, eps, max_iters);
}

AlphabetProjection update_phi1(const ComplexVector& phi, int resolution) {
    if (resolution < 2)
        throw std::invalid_argument("update_phi1: alphabet size must be >= 2");
    AlphabetProjection out;
    out.values.resize(phi.size());
    out.indices.resize(static_cast<std::size_t>(phi.size()));
    for (Index i = 0; i < phi.size(); ++i) {
        const double psi = std::arg(phi(i));
        int best_m = 0;
        double best = -2.0;
        for (int m = 0; m < resolution; ++m) {
            const double score = std::cos(2.0 * kPi * m / resolution - psi);
            if (score > best) { // strict: ties keep the smaller m
                best = score;
                best_m = m;
            }
        }
        out.indices[static_cast<std::size_t>(i)] = best_m;
        out.values(i) = std::polar(1.0, 2.0 * kPi * best_m / resolution);
    }
    return out;
}

ComplexMatrix update_U(const ComplexVector& phi) {
    return nearest_unitary(symmetric_from_vech(phi));
}

double lagrangian_value(const OptimizerState& st, const LemmaTerms& terms, double beta,
                        const ComplexMatrix& qbar0) {
    double val = -objective_variable(st.phi, terms, qbar0, beta);
    val += 0.5 * st.rho.rho0 * (st.phi0 - st.phi).squaredNorm();
    if (st.phi1)
        val += 0.5 * st.rho.rho1 * (*st.phi1 - st.phi).squaredNorm();
    if (st.u.size() > 0)
        val += 0.5 * st.rho.rho2 * (vech(st.u) - st.phi).squaredNorm();
    return val;
}

double lagrangian_value(const OptimizerState& st, const LemmaTerms& terms, double beta) {
    const ComplexMatrix qbar0 = build_qbar(expand_to_matrix(st.phi0, terms.expansion), terms);
    return lagrangian_value(st, terms, beta, qbar0);
}

namespace {

struct PenaltyProblem {
    RealMatrix expansion;
    bool with_unitary_latent = false;
    int resolution = 0; // 0 = continuous
};

double nan_value() {
    return std::numeric_limits<double>::quiet_NaN();
}

RunResult run_penalty_solver(const SystemConfig& cfg, const ChannelSet& ch,
                             const PenaltyProblem& prob, const ComplexMatrix& phi_init,
                             const RunOptions& options) {
    const int l = cfg.ris_elements();
    const LemmaTerms terms = build_lemma_terms(ch, cfg, prob.expansion);
    const PenaltyConfig& pc = cfg.penalty;

    OptimizerState st;
    // Reduced start: unit-modulus projection of the init surface through the
    // expansion's left inverse (vech for the symmetric case, diagonal pick
    // for the selection case). Both are plain entry reads.
    if (prob.with_unitary_latent) {
        st.phi = unimodular_projection(vech(phi_init));
        st.u = nearest_unitary(phi_init);
    } else {
        st.phi = unimodular_projection(phi_init.diagonal());
        st.u = ComplexMatrix(); // unused
    }
    st.phi0 = st.phi;
    if (prob.resolution >= 2)
        st.phi1 = update_phi1(st.phi, prob.resolution).values;

    ComplexMatrix qbar0 = build_qbar(expand_to_matrix(st.phi0, prob.expansion), terms);

    // Automatic penalty weights from the quadratic-form scales at the start.
    const double n_red = static_cast<double>(st.phi.size());
    const double rho_auto =
        10.0 * (spectral_norm_hermitian(terms.q_tilde) + cfg.beta * spectral_norm_hermitian(qbar0)) /
        n_red;
    const double rho_floor = 1e-12;
    st.rho.rho0 = std::max(pc.rho0.value_or(rho_auto), rho_floor);
    st.rho.rho1 = std::max(pc.rho1.value_or(rho_auto), rho_floor);
    st.rho.rho2 = std::max(pc.rho2.value_or(rho_auto), rho_floor);

    RunResult out;
    bool converged = false;
    int iter = 0;

    // Non-convergence returns the best point seen, judged by the weighted SNR
    // of the deliverable matrix (alphabet-exact in discrete mode).
    struct Snapshot {
        OptimizerState state;
        std::vector<int> indices;
        double snr_t = -1.0;
        bool set = false;
    } best;

    auto deliverable_snr = [&](const OptimizerState& s) {
        const ComplexVector& v = prob.resolution >= 2 ? *s.phi1 : s.phi;
        const ComplexMatrix mat = expand_to_matrix(v, prob.expansion);
        const double c = snr_c_trace(effective_channel(ch.f, ch.h, ch.g, mat), ch.precoder,
                                     cfg.sigma2_c_w);
        const double r = snr_r_trace(radar_matrix(ch.g, mat, terms.steering, ch.alpha_t),
                                     ch.precoder, cfg.sigma2_r_w);
        return cfg.beta * r + (1.0 - cfg.beta) * c;
    };

    for (iter = 1; iter <= pc.max_outer_iters; ++iter) {
        const ComplexVector phi_prev = st.phi;
        const ComplexVector phi_new =
            update_phi(st, terms, qbar0, cfg.beta, pc.eps_inner, pc.max_inner_iters);

        const ComplexMatrix qbarbar =
            build_qbarbar(expand_to_matrix(phi_new, prob.expansion), terms);
        st.phi0 = update_phi0(st, phi_new, qbarbar, cfg.beta, pc.eps_inner_latent,
                              pc.max_inner_iters);
        st.phi = phi_new;
        if (prob.resolution >= 2) {
            AlphabetProjection proj = update_phi1(st.phi, prob.resolution);
            st.phi1 = proj.values;
            out.alphabet_indices = std::move(proj.indices);
        }
        if (prob.with_unitary_latent)
            st.u = update_U(st.phi);
        st.outer_iter = iter;

        qbar0 = build_qbar(expand_to_matrix(st.phi0, prob.expansion), terms);

        if (options.collect_trace) {
            const ComplexMatrix phi_mat = expand_to_matrix(st.phi, prob.expansion);
            TraceRow row;
            row.outer_iter = iter;
            row.snr_c = snr_c_trace(effective_channel(ch.f, ch.h, ch.g, phi_mat), ch.precoder,
                                    cfg.sigma2_c_w);
            row.snr_r = snr_r_trace(radar_matrix(ch.g, phi_mat, terms.steering, ch.alpha_t),
                                    ch.precoder, cfg.sigma2_r_w);
            row.snr_t = cfg.beta * row.snr_r + (1.0 - cfg.beta) * row.snr_c;
            row.lagrangian = lagrangian_value(st, terms, cfg.beta, qbar0);
            row.res_phi0 = (st.phi0 - st.phi).norm();
            row.res_phi1 = st.phi1 ? (*st.phi1 - st.phi).norm() : nan_value();
            row.res_u = prob.with_unitary_latent ? (vech(st.u) - st.phi).norm() : nan_value();
            row.unitarity = (phi_mat.adjoint() * phi_mat -
                             ComplexMatrix::Identity(l, l)).norm();
            out.trace.push_back(row);
        }

        const double snr_now = deliverable_snr(st);
        if (!best.set || snr_now > best.snr_t) {
            best.state = st;
            best.indices = out.alphabet_indices;
            best.snr_t = snr_now;
            best.set = true;
        }

        if ((st.phi - phi_prev).norm() <= pc.eps_outer) {
            converged = true;
            break;
        }
        if (pc.ramp && iter % 10 == 0) {
            st.rho.rho0 *= 1.5;
            st.rho.rho1 *= 1.5;
            st.rho.rho2 *= 1.5;
        }
    }

    out.converged = converged;
    out.outer_iterations = std::min(iter, pc.max_outer_iters);
    if (!converged && best.set) {
        st = best.state;
        out.alphabet_indices = best.indices;
    }
    out.state = st;
    out.phi_relaxed = expand_to_matrix(st.phi, prob.expansion);
    out.phi = prob.resolution >= 2 ? expand_to_matrix(*st.phi1, prob.expansion) : out.phi_relaxed;

    out.unitarity_residual =
        (out.phi.adjoint() * out.phi - ComplexMatrix::Identity(l, l)).norm();
    out.snr_c = snr_c_trace(effective_channel(ch.f, ch.h, ch.g, out.phi), ch.precoder,
                            cfg.sigma2_c_w);
    out.snr_r = snr_r_trace(radar_matrix(ch.g, out.phi, terms.steering, ch.alpha_t), ch.precoder,
                            cfg.sigma2_r_w);
    out.snr_t = cfg.beta * out.snr_r + (1.0 - cfg.beta) * out.snr_c;
    return out;
}

} // namespace

RunResult run_algorithm1(const SystemConfig& cfg, const ChannelSet& ch, PhaseMode mode,
                         const RunOptions& options) {
    cfg.validate();
    if (mode == PhaseMode::discrete && cfg.resolution < 2)
        throw ConfigError("phases.resolution: discrete design requires an alphabet size >= 2");
    const int l = cfg.ris_elements();

    PenaltyProblem prob;
    prob.expansion = duplication_matrix(l);
    prob.with_unitary_latent = true;
    prob.resolution = mode == PhaseMode::discrete ? cfg.resolution : 0;

    ComplexMatrix phi_init;
    if (options.initial_phi) {
        phi_init = *options.initial_phi;
        if (phi_init.rows() != l || phi_init.cols() != l)
            throw std::invalid_argument("run_algorithm1: initial surface has wrong size");
    } else {
        auto rng = make_stream(cfg.seed, ch.trial_index, StreamTag::init);
        phi_init = random_symmetric_unitary(l, rng);
    }
    return run_penalty_solver(cfg, ch, prob, phi_init, options);
}

RunResult dris_optimize(const SystemConfig& cfg, const ChannelSet& ch, PhaseMode mode,
                        const RunOptions& options) {
    cfg.validate();
    if (mode == PhaseMode::discrete && cfg.resolution < 2)
        throw ConfigError("phases.resolution: discrete design requires an alphabet size >= 2");
    const int l = cfg.ris_elements();

    PenaltyProblem prob;
    // vec(diag(x)) = S x with S picking the diagonal slots.
    RealMatrix sel = RealMatrix::Zero(static_cast<Index>(l) * l, l);
    for (int i = 0; i < l; ++i)
        sel(static_cast<Index>(i) * l + i, i) = 1.0;
    prob.expansion = std::move(sel);
    prob.with_unitary_latent = false;
    prob.resolution = mode == PhaseMode::discrete ? cfg.resolution : 0;

    ComplexMatrix phi_init;
    if (options.initial_phi) {
        phi_init = *options.initial_phi;
    } else {
        auto rng = make_stream(cfg.seed, ch.trial_index, StreamTag::init);
        phi_init = random_symmetric_unitary(l, rng);
    }
    return run_penalty_solver(cfg, ch, prob, phi_init, options);
}

} // namespace bdris
