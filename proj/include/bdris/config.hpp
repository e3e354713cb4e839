#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bdris {

// Penalty/stopping parameters for the alternating solver. Unset rho values
// are picked automatically at initialization from the quadratic-form norms.
struct PenaltyConfig {
    std::optional<double> rho0;
    std::optional<double> rho1;
    std::optional<double> rho2;
    double eps_inner = 1e-6;        // phase-update fixed-point stop
    double eps_inner_latent = 1e-6; // latent-phase fixed-point stop
    double eps_outer = 1e-4;        // outer stop on consecutive phase vectors
    int max_inner_iters = 500;
    int max_outer_iters = 200;
    bool ramp = false;              // multiply all rho by 1.5 every 10 outer iterations
    void validate() const;          // throws ConfigError naming the field
};

enum class PrecoderKind { gaussian, dft };

// Full scenario description: geometry, array sizes, powers, noise,
// phase-resolution mode and solver parameters.
struct SystemConfig {
    int n_tx = 8;     // dual-function BS antennas (Tx and Rx counts match)
    int n_users = 4;
    int ris_lx = 4;
    int ris_ly = 4;
    double fc_hz = 3.0e9;
    std::optional<double> spacing_m; // element spacing, default lambda/2
    int resolution = 0;              // 0 = continuous phases, otherwise alphabet size M >= 2
    double beta = 0.5;               // radar weight in the combined objective
    double sigma2_c_w = 1e-13;       // communication noise power, watts
    double sigma2_r_w = 1e-13;       // radar noise power, watts
    double p0 = 1e-3;                // reference path gain at 1 m, linear
    double alpha_rd = 2.0;           // BS-RIS path-loss exponent
    double alpha_ur = 2.8;           // RIS-user path-loss exponent
    double alpha_ud = 4.0;           // BS-user path-loss exponent
    Eigen::Vector3d pos_dfbs{0.0, 0.0, 0.0};
    Eigen::Vector3d pos_ris{30.0, 30.0, 0.0};
    Eigen::Vector3d pos_users{20.0, 20.0, 0.0};
    Eigen::Vector3d pos_target{20.0, 20.0, 0.0};
    double tx_power_w = 1.0;
    PrecoderKind precoder = PrecoderKind::gaussian;
    std::uint64_t seed = 1;
    PenaltyConfig penalty;

    int ris_elements() const { return ris_lx * ris_ly; }
    double wavelength() const { return 3.0e8 / fc_hz; }
    double spacing() const { return spacing_m ? *spacing_m : wavelength() / 2.0; }
    void validate() const; // throws ConfigError naming the field
};

// What a `run` invocation executes: one architecture on one trial.
struct RunSpec {
    SystemConfig config;
    std::string architecture = "bdris"; // bdris | dris | no-ris | random, optionally -continuous / -M suffix
    std::uint64_t trial = 0;
};

// Architecture token parsed into (family, resolution override). The token
// grammar: "bdris", "dris" (resolution from the scenario), explicit
// "bdris-continuous", "bdris-16", "dris-4", plus "no-ris" and "random".
struct ArchSpec {
    enum class Family { bdris, dris, no_ris, random };
    Family family = Family::bdris;
    std::optional<int> resolution; // engaged: 0 = continuous, M >= 2 = discrete
    std::string canonical(const SystemConfig& cfg) const;
    int effective_resolution(const SystemConfig& cfg) const;
};
ArchSpec parse_architecture(const std::string& token); // throws ConfigError

// One sweep axis applied to a base scenario, each value paired with every
// architecture over `trials` fresh channel draws.
struct SweepSpec {
    std::string axis; // beta | L | M | architecture
    std::vector<std::string> value_tokens;      // printable per-value labels
    std::vector<double> beta_values;            // axis == beta
    std::vector<std::pair<int, int>> l_values;  // axis == L, (lx, ly)
    std::vector<int> m_values;                  // axis == M, 0 = continuous
    std::vector<std::string> architectures;     // evaluated per value (or the axis itself)
    int trials = 1;
    SystemConfig base;
    std::string output_dir = "out";
    void validate() const;
};

double dbm_to_watts(double dbm);
double db_to_linear(double db);

// Read + validate a JSON scenario file. `overrides` are dotted
// key=value pairs applied before validation (see --set).
RunSpec load_run_spec(const std::string& path, const std::vector<std::string>& overrides);
RunSpec parse_run_spec(const std::string& text, const std::string& origin,
                       const std::vector<std::string>& overrides);

SweepSpec load_sweep_spec(const std::string& path);
SweepSpec parse_sweep_spec(const std::string& text, const std::string& origin,
                           const std::string& base_dir);

} // namespace bdris
