#include "bdris/baselines.hpp"

#include "bdris/errors.hpp"

#include <cmath>

namespace bdris {

SnrTriple no_ris_snr(const SystemConfig& cfg, const ChannelSet& ch) {
    SnrTriple s;
    s.snr_c = snr_c_trace(ch.f, ch.precoder, cfg.sigma2_c_w);
    s.snr_r = 0.0;
    s.snr_t = cfg.beta * s.snr_r + (1.0 - cfg.beta) * s.snr_c;
    return s;
}

ComplexMatrix random_symmetric_unitary(int l, std::mt19937_64& stream) {
    if (l < 1)
        throw std::invalid_argument("random_symmetric_unitary: size must be >= 1");
    std::normal_distribution<double> n(0.0, 1.0);
    ComplexMatrix a(l, l);
    for (Index j = 0; j < l; ++j)
        for (Index i = 0; i < l; ++i)
            a(i, j) = Complex(n(stream), n(stream));

    // Haar unitary: QR with the phases of R's diagonal folded into Q.
    Eigen::HouseholderQR<ComplexMatrix> qr(a);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < l; ++j) {
        const Complex d = r(j, j);
        const double mag = std::abs(d);
        q.col(j) *= mag == 0.0 ? Complex(1.0, 0.0) : d / mag;
    }
    return q * q.transpose();
}

SnrTriple evaluate_surface(const SystemConfig& cfg, const ChannelSet& ch,
                           const ComplexMatrix& phi) {
    const int l = cfg.ris_elements();
    if (phi.rows() != l || phi.cols() != l)
        throw std::invalid_argument("evaluate_surface: surface has wrong size");
    const ComplexVector a = steering_vector(ch.theta_h, ch.theta_v, cfg.ris_lx, cfg.ris_ly,
                                            cfg.wavelength(), cfg.spacing());
    SnrTriple s;
    s.snr_c = snr_c_trace(effective_channel(ch.f, ch.h, ch.g, phi), ch.precoder, cfg.sigma2_c_w);
    s.snr_r = snr_r_trace(radar_matrix(ch.g, phi, a, ch.alpha_t), ch.precoder, cfg.sigma2_r_w);
    s.snr_t = cfg.beta * s.snr_r + (1.0 - cfg.beta) * s.snr_c;
    return s;
}

} // namespace bdris
