#pragma once

#include "bdris/config.hpp"
#include "bdris/linalg.hpp"

#include <cstdint>
#include <random>
#include <utility>

namespace bdris {

// One channel realization: everything random that a single trial needs,
// drawn deterministically from (config.seed, trial_index).
struct ChannelSet {
    ComplexMatrix f; // K x N, direct BS->users
    ComplexMatrix h; // K x L, RIS->users
    ComplexMatrix g; // L x N, BS->RIS
    double theta_h = 0.0; // target azimuth seen from the RIS
    double theta_v = 0.0; // target elevation seen from the RIS
    Complex alpha_t{0.0, 0.0}; // two-hop radar gain
    ComplexMatrix precoder;    // N x K, scaled to the configured transmit power
    std::uint64_t trial_index = 0;
};

// Planar-array steering vector a(theta_h, theta_v) = a_x kron a_y with
// lx * ly entries of unit modulus; both factors advance phase with
// cos(theta_h) * sin(theta_v).
ComplexVector steering_vector(double theta_h, double theta_v, int lx, int ly,
                              double wavelength, double spacing);

// (azimuth, elevation) of `target` as seen from `ris`. Coincident points are
// rejected (ConfigError).
std::pair<double, double> doa_from_positions(const Eigen::Vector3d& ris,
                                             const Eigen::Vector3d& target);

// Distance-power law p0 * d^-alpha with a floor distance of 1 m.
double path_loss(double distance_m, double exponent, double p0);

// Precoder matrix with ||P||_F^2 = tx_power. Gaussian entries by default;
// the DFT variant is deterministic and exists for tests.
ComplexMatrix make_precoder(const SystemConfig& cfg, std::mt19937_64& stream);

ChannelSet sample_channels(const SystemConfig& cfg, std::uint64_t trial_index);

} // namespace bdris
