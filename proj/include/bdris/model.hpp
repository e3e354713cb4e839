#pragma once

#include "bdris/channel.hpp"
#include "bdris/linalg.hpp"

namespace bdris {

// Effective downlink channel C = F + H * Phi * G.
ComplexMatrix effective_channel(const ComplexMatrix& f, const ComplexMatrix& h,
                                const ComplexMatrix& g, const ComplexMatrix& phi);

// Two-hop radar response R = alpha_t * (G^T Phi a)(a^T Phi G).
ComplexMatrix radar_matrix(const ComplexMatrix& g, const ComplexMatrix& phi,
                           const ComplexVector& a, Complex alpha_t);

// Trace-form SNRs: (1/sigma2) * Tr(M P P^H M^H) = (1/sigma2) * ||M P||_F^2.
// These are the ground truth every quadratic-form reformulation is tested against.
double snr_c_trace(const ComplexMatrix& c, const ComplexMatrix& p, double sigma2_c);
double snr_r_trace(const ComplexMatrix& r, const ComplexMatrix& p, double sigma2_r);

// Quadratic reformulation of the two SNRs over a reduced phase vector phi
// with vec(Phi) = expansion * phi. For the symmetric surface the expansion is
// the duplication matrix; the diagonal baseline uses a selection matrix.
//
//   SNR_c = phi^H q_tilde phi + 2 Re{q^H phi} + const_c
//   SNR_r = phi^H qbar(Phi0) phi            (bilinear, frozen at Phi0)
struct LemmaTerms {
    ComplexMatrix q_tilde; // n x n Hermitian PSD
    ComplexVector q;       // n
    double const_c = 0.0;  // direct-link-only SNR contribution
    ComplexMatrix p_hat;   // KN x KN precoder Gram factor (communication)
    ComplexMatrix p_bar;   // N^2 x N^2 precoder Gram factor (radar, carries |alpha_t|^2/sigma2_r)
    RealMatrix expansion;  // L^2 x n, 0/1
    ComplexVector steering;
    ComplexMatrix g;       // cached BS->RIS channel for rebuilding radar forms
};

// Communication-side terms only (q_tilde, q, const_c, p_hat).
LemmaTerms build_lemma1_terms(const ComplexMatrix& f, const ComplexMatrix& h,
                              const ComplexMatrix& g, const ComplexMatrix& p,
                              double sigma2_c, const RealMatrix& expansion);

// Everything the alternating solver needs for one channel realization.
LemmaTerms build_lemma_terms(const ChannelSet& ch, const SystemConfig& cfg,
                             const RealMatrix& expansion);

double snr_c_quadratic(const ComplexVector& phi, const LemmaTerms& terms);

// Radar quadratic form frozen at Phi0: qbar(Phi0) with
// factor (G^T kron G^T Phi0 a a^T) * expansion.
ComplexMatrix build_qbar(const ComplexMatrix& phi0, const ComplexMatrix& g,
                         const ComplexVector& a, const ComplexMatrix& p,
                         Complex alpha_t, double sigma2_r, const RealMatrix& expansion);
ComplexMatrix build_qbar(const ComplexMatrix& phi0, const LemmaTerms& terms);

// Swapped form: phi^H qbar(Phi0) phi == phi0^H qbarbar(Phi) phi0, with
// factor (G^T Phi^T a a^T kron G^T) * expansion. Same scalar, applied once.
ComplexMatrix build_qbarbar(const ComplexMatrix& phi, const ComplexMatrix& g,
                            const ComplexVector& a, const ComplexMatrix& p,
                            Complex alpha_t, double sigma2_r, const RealMatrix& expansion);
ComplexMatrix build_qbarbar(const ComplexMatrix& phi, const LemmaTerms& terms);

// Variable part of the weighted objective at phi given the frozen radar form:
// beta * phi^H qbar0 phi + (1-beta) * (phi^H q_tilde phi + 2 Re{q^H phi}).
double objective_variable(const ComplexVector& phi, const LemmaTerms& terms,
                          const ComplexMatrix& qbar0, double beta);

// Full weighted SNR including the direct-link constant.
double objective_full(const ComplexVector& phi, const LemmaTerms& terms,
                      const ComplexMatrix& qbar0, double beta);

// Reduced phase vector back to the full surface: unvec(expansion * phi).
ComplexMatrix expand_to_matrix(const ComplexVector& phi, const RealMatrix& expansion);

// Bilinear surrogate f(phi, phi0); equals objective_variable when phi0 == phi.
double surrogate_objective(const ComplexVector& phi, const ComplexVector& phi0,
                           const LemmaTerms& terms, double beta);

} // namespace bdris
