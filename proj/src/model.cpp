#include "bdris/model.hpp"

#include "bdris/errors.hpp"

#include <cmath>

namespace bdris {

namespace {

ComplexMatrix hermitize(const ComplexMatrix& a) {
    return 0.5 * (a + a.adjoint());
}

// (P^T kron I_m)^H (P^T kron I_m), the Gram factor both trace-to-quadratic
// rewrites share; scaling (noise, radar gain) is applied by the callers.
ComplexMatrix precoder_gram(const ComplexMatrix& p, Index m) {
    const ComplexMatrix kp = kron(p.transpose(), ComplexMatrix::Identity(m, m));
    return kp.adjoint() * kp;
}

} // namespace

ComplexMatrix effective_channel(const ComplexMatrix& f, const ComplexMatrix& h,
                                const ComplexMatrix& g, const ComplexMatrix& phi) {
    return f + h * phi * g;
}

ComplexMatrix radar_matrix(const ComplexMatrix& g, const ComplexMatrix& phi,
                           const ComplexVector& a, Complex alpha_t) {
    const ComplexVector left = g.transpose() * phi * a;        // N
    const Eigen::RowVectorXcd right = a.transpose() * phi * g; // 1 x N
    return alpha_t * (left * right);
}

double snr_c_trace(const ComplexMatrix& c, const ComplexMatrix& p, double sigma2_c) {
    if (sigma2_c <= 0.0)
        throw std::invalid_argument("snr_c_trace: noise power must be positive");
    return (c * p).squaredNorm() / sigma2_c;
}

double snr_r_trace(const ComplexMatrix& r, const ComplexMatrix& p, double sigma2_r) {
    if (sigma2_r <= 0.0)
        throw std::invalid_argument("snr_r_trace: noise power must be positive");
    return (r * p).squaredNorm() / sigma2_r;
}

LemmaTerms build_lemma1_terms(const ComplexMatrix& f, const ComplexMatrix& h,
                              const ComplexMatrix& g, const ComplexMatrix& p,
                              double sigma2_c, const RealMatrix& expansion) {
    if (sigma2_c <= 0.0)
        throw std::invalid_argument("build_lemma1_terms: noise power must be positive");
    const Index k = f.rows();
    const Index l = h.cols();
    if (g.rows() != l || h.rows() != k || g.cols() != f.cols() || p.rows() != f.cols())
        throw std::invalid_argument("build_lemma1_terms: inconsistent channel dimensions");
    if (expansion.rows() != l * l)
        throw std::invalid_argument("build_lemma1_terms: expansion must have L^2 rows");
    require_finite(f, "direct channel");
    require_finite(h, "surface-user channel");
    require_finite(g, "BS-surface channel");
    require_finite(p, "precoder");

    LemmaTerms t;
    t.expansion = expansion;
    t.g = g;
    t.p_hat = (1.0 / sigma2_c) * precoder_gram(p, k);

    // vec(H Phi G) = (G^T kron H) vec(Phi), restricted to the reduced vector.
    const ComplexMatrix factor = kron(g.transpose(), h) * expansion.cast<Complex>();
    t.q_tilde = hermitize(factor.adjoint() * t.p_hat * factor);
    const ComplexVector vf = vec(f);
    t.q = factor.adjoint() * (t.p_hat * vf);
    t.const_c = real_checked(vf.dot(t.p_hat * vf), "direct-link quadratic form");
    return t;
}

LemmaTerms build_lemma_terms(const ChannelSet& ch, const SystemConfig& cfg,
                             const RealMatrix& expansion) {
    LemmaTerms t = build_lemma1_terms(ch.f, ch.h, ch.g, ch.precoder, cfg.sigma2_c_w, expansion);
    if (cfg.sigma2_r_w <= 0.0)
        throw std::invalid_argument("build_lemma_terms: radar noise power must be positive");
    const Index n = ch.g.cols();
    t.p_bar = (std::norm(ch.alpha_t) / cfg.sigma2_r_w) * precoder_gram(ch.precoder, n);
    t.steering = steering_vector(ch.theta_h, ch.theta_v, cfg.ris_lx, cfg.ris_ly,
                                 cfg.wavelength(), cfg.spacing());
    return t;
}

double snr_c_quadratic(const ComplexVector& phi, const LemmaTerms& terms) {
    const double quad = real_checked(phi.dot(terms.q_tilde * phi), "communication quadratic form");
    return quad + 2.0 * terms.q.dot(phi).real() + terms.const_c;
}

ComplexMatrix build_qbar(const ComplexMatrix& phi0, const ComplexMatrix& g,
                         const ComplexVector& a, const ComplexMatrix& p,
                         Complex alpha_t, double sigma2_r, const RealMatrix& expansion) {
    if (sigma2_r <= 0.0)
        throw std::invalid_argument("build_qbar: noise power must be positive");
    const ComplexMatrix p_bar = (std::norm(alpha_t) / sigma2_r) * precoder_gram(p, g.cols());
    const ComplexMatrix right = (g.transpose() * phi0 * a) * a.transpose(); // N x L
    const ComplexMatrix factor = kron(g.transpose(), right) * expansion.cast<Complex>();
    return hermitize(factor.adjoint() * p_bar * factor);
}

ComplexMatrix build_qbar(const ComplexMatrix& phi0, const LemmaTerms& terms) {
    const ComplexMatrix right = (terms.g.transpose() * phi0 * terms.steering) * terms.steering.transpose();
    const ComplexMatrix factor = kron(terms.g.transpose(), right) * terms.expansion.cast<Complex>();
    return hermitize(factor.adjoint() * terms.p_bar * factor);
}

ComplexMatrix build_qbarbar(const ComplexMatrix& phi, const ComplexMatrix& g,
                            const ComplexVector& a, const ComplexMatrix& p,
                            Complex alpha_t, double sigma2_r, const RealMatrix& expansion) {
    if (sigma2_r <= 0.0)
        throw std::invalid_argument("build_qbarbar: noise power must be positive");
    const ComplexMatrix p_bar = (std::norm(alpha_t) / sigma2_r) * precoder_gram(p, g.cols());
    const ComplexMatrix left = (g.transpose() * phi.transpose() * a) * a.transpose(); // N x L
    const ComplexMatrix factor = kron(left, g.transpose()) * expansion.cast<Complex>();
    return hermitize(factor.adjoint() * p_bar * factor);
}

ComplexMatrix build_qbarbar(const ComplexMatrix& phi, const LemmaTerms& terms) {
    const ComplexMatrix left =
        (terms.g.transpose() * phi.transpose() * terms.steering) * terms.steering.transpose();
    const ComplexMatrix factor = kron(left, terms.g.transpose()) * terms.expansion.cast<Complex>();
    return hermitize(factor.adjoint() * terms.p_bar * factor);
}

double objective_variable(const ComplexVector& phi, const LemmaTerms& terms,
                          const ComplexMatrix& qbar0, double beta) {
    const double radar = real_checked(phi.dot(qbar0 * phi), "radar quadratic form");
    const double comm = real_checked(phi.dot(terms.q_tilde * phi), "communication quadratic form") +
                        2.0 * terms.q.dot(phi).real();
    return beta * radar + (1.0 - beta) * comm;
}

double objective_full(const ComplexVector& phi, const LemmaTerms& terms,
                      const ComplexMatrix& qbar0, double beta) {
    return objective_variable(phi, terms, qbar0, beta) + (1.0 - beta) * terms.const_c;
}

ComplexMatrix expand_to_matrix(const ComplexVector& phi, const RealMatrix& expansion) {
    const auto l = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(expansion.rows()))));
    if (l * l != expansion.rows() || expansion.cols() != phi.size())
        throw std::invalid_argument("expand_to_matrix: expansion shape does not match phase vector");
    return unvec(expansion.cast<Complex>() * phi, l, l);
}

double surrogate_objective(const ComplexVector& phi, const ComplexVector& phi0,
                           const LemmaTerms& terms, double beta) {
    const ComplexMatrix qbar0 = build_qbar(expand_to_matrix(phi0, terms.expansion), terms);
    return objective_variable(phi, terms, qbar0, beta);
}

} // namespace bdris
