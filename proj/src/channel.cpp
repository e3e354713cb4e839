#include "bdris/channel.hpp"

#include "bdris/errors.hpp"
#include "bdris/rng.hpp"

#include <cmath>
#include <numbers>

namespace bdris {

namespace {

constexpr double kPi = std::numbers::pi;

// CN(0, variance): independent real/imag parts with variance/2 each.
ComplexMatrix complex_gaussian(Index rows, Index cols, double variance, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, std::sqrt(variance / 2.0));
    ComplexMatrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
            m(i, j) = Complex(n(rng), n(rng));
    return m;
}

ComplexVector axis_steering(int count, double phase_step) {
    ComplexVector v(count);
    for (int k = 0; k < count; ++k)
        v(k) = std::polar(1.0, phase_step * k);
    return v;
}

} // namespace

ComplexVector steering_vector(double theta_h, double theta_v, int lx, int ly,
                              double wavelength, double spacing) {
    if (lx < 1 || ly < 1)
        throw std::invalid_argument("steering_vector: array sides must be >= 1");
    if (wavelength <= 0.0 || spacing <= 0.0)
        throw std::invalid_argument("steering_vector: wavelength and spacing must be positive");
    // Both array axes advance phase with cos(theta_h) * sin(theta_v).
    const double step = 2.0 * kPi * (spacing / wavelength) * std::cos(theta_h) * std::sin(theta_v);
    return kron(axis_steering(lx, step), axis_steering(ly, step));
}

std::pair<double, double> doa_from_positions(const Eigen::Vector3d& ris,
                                             const Eigen::Vector3d& target) {
    const Eigen::Vector3d d = target - ris;
    const double range = d.norm();
    if (range <= 0.0)
        throw ConfigError("geometry: target coincides with the RIS, direction undefined");
    const double theta_h = std::atan2(d.y(), d.x());
    const double theta_v = std::acos(std::clamp(d.z() / range, -1.0, 1.0));
    return {theta_h, theta_v};
}

double path_loss(double distance_m, double exponent, double p0) {
    if (p0 <= 0.0)
        throw std::invalid_argument("path_loss: reference gain must be positive");
    if (exponent < 0.0)
        throw std::invalid_argument("path_loss: exponent must be non-negative");
    const double d = std::max(distance_m, 1.0);
    return p0 * std::pow(d, -exponent);
}

ComplexMatrix make_precoder(const SystemConfig& cfg, std::mt19937_64& stream) {
    const int n = cfg.n_tx, k = cfg.n_users;
    ComplexMatrix p(n, k);
    if (cfg.precoder == PrecoderKind::dft) {
        for (int col = 0; col < k; ++col)
            for (int row = 0; row < n; ++row)
                p(row, col) = std::polar(1.0, 2.0 * kPi * row * col / n);
    } else {
        p = complex_gaussian(n, k, 1.0, stream);
    }
    const double norm = p.norm();
    if (norm <= 0.0)
        throw NumericalError("make_precoder: degenerate zero precoder draw");
    return p * (std::sqrt(cfg.tx_power_w) / norm);
}

ChannelSet sample_channels(const SystemConfig& cfg, std::uint64_t trial_index) {
    cfg.validate();
    const int n = cfg.n_tx, k = cfg.n_users, l = cfg.ris_elements();

    const double d_rd = (cfg.pos_ris - cfg.pos_dfbs).norm();
    const double d_ur = (cfg.pos_users - cfg.pos_ris).norm();
    const double d_ud = (cfg.pos_users - cfg.pos_dfbs).norm();
    const double p_rd = path_loss(d_rd, cfg.alpha_rd, cfg.p0);
    const double p_ur = path_loss(d_ur, cfg.alpha_ur, cfg.p0);
    const double p_ud = path_loss(d_ud, cfg.alpha_ud, cfg.p0);

    auto rng = make_stream(cfg.seed, trial_index, StreamTag::channels);

    ChannelSet ch;
    ch.trial_index = trial_index;
    ch.g = complex_gaussian(l, n, p_rd, rng);
    ch.h = complex_gaussian(k, l, p_ur, rng);
    ch.f = complex_gaussian(k, n, p_ud, rng);
    ch.alpha_t = complex_gaussian(1, 1, 1.0, rng)(0, 0);

    std::tie(ch.theta_h, ch.theta_v) = doa_from_positions(cfg.pos_ris, cfg.pos_target);

    auto prng = make_stream(cfg.seed, trial_index, StreamTag::precoder);
    ch.precoder = make_precoder(cfg, prng);
    return ch;
}

} // namespace bdris
