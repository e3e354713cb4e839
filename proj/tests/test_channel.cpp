#include "bdris/channel.hpp"
#include "bdris/errors.hpp"
#include "bdris/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>

using namespace bdris;

namespace {

constexpr double kPi = 3.14159265358979323846;

SystemConfig small_config() {
    SystemConfig cfg;
    cfg.n_tx = 3;
    cfg.n_users = 2;
    cfg.ris_lx = 2;
    cfg.ris_ly = 2;
    cfg.seed = 11;
    return cfg;
}

} // namespace

TEST_SUITE("channel") {

TEST_CASE("steering vector entries are unit modulus") {
    const ComplexVector a = steering_vector(0.7, 1.1, 3, 4, 0.1, 0.05);
    REQUIRE(a.size() == 12);
    for (Index i = 0; i < a.size(); ++i)
        CHECK(std::abs(std::abs(a(i)) - 1.0) < 1e-12);
}

TEST_CASE("steering vector factors as a_x kron a_y") {
    const double th = 0.4, tv = 0.9, lam = 0.1, d = 0.05;
    const int lx = 3, ly = 2;
    const ComplexVector a = steering_vector(th, tv, lx, ly, lam, d);
    // Both factors advance phase with cos(th) * sin(tv).
    const double step = 2.0 * kPi * (d / lam) * std::cos(th) * std::sin(tv);
    for (int ix = 0; ix < lx; ++ix)
        for (int iy = 0; iy < ly; ++iy) {
            const Complex want = std::polar(1.0, step * ix) * std::polar(1.0, step * iy);
            CHECK(std::abs(a(ix * ly + iy) - want) < 1e-12);
        }
}

TEST_CASE("steering vector at broadside is all ones") {
    // theta_v = 0 makes sin(theta_v) = 0, so every phase is zero.
    const ComplexVector a = steering_vector(0.3, 0.0, 4, 4, 0.1, 0.05);
    CHECK((a.array() - Complex(1.0, 0.0)).abs().maxCoeff() < 1e-12);
}

TEST_CASE("doa recovers axis-aligned directions") {
    const Eigen::Vector3d ris(0.0, 0.0, 0.0);
    SUBCASE("along +x") {
        auto [th, tv] = doa_from_positions(ris, {5.0, 0.0, 0.0});
        CHECK(std::abs(th - 0.0) < 1e-12);
        CHECK(std::abs(tv - kPi / 2.0) < 1e-12);
    }
    SUBCASE("along +y") {
        auto [th, tv] = doa_from_positions(ris, {0.0, 5.0, 0.0});
        CHECK(std::abs(th - kPi / 2.0) < 1e-12);
        CHECK(std::abs(tv - kPi / 2.0) < 1e-12);
    }
    SUBCASE("along +z") {
        auto [th, tv] = doa_from_positions(ris, {0.0, 0.0, 5.0});
        CHECK(std::abs(tv - 0.0) < 1e-12);
    }
    SUBCASE("diagonal in the plane") {
        auto [th, tv] = doa_from_positions(ris, {3.0, 3.0, 0.0});
        CHECK(std::abs(th - kPi / 4.0) < 1e-12);
        CHECK(std::abs(tv - kPi / 2.0) < 1e-12);
    }
}

TEST_CASE("doa is invariant to range") {
    auto [th1, tv1] = doa_from_positions({1.0, 2.0, 3.0}, {4.0, 6.0, 8.0});
    auto [th2, tv2] = doa_from_positions({1.0, 2.0, 3.0}, {7.0, 10.0, 13.0});
    CHECK(std::abs(th1 - th2) < 1e-12);
    CHECK(std::abs(tv1 - tv2) < 1e-12);
}

TEST_CASE("doa rejects coincident points") {
    CHECK_THROWS_AS(doa_from_positions({1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}), ConfigError);
}

TEST_CASE("path loss follows p0 * d^-alpha with a 1 m floor") {
    CHECK(path_loss(10.0, 2.0, 1e-3) == doctest::Approx(1e-5).epsilon(1e-12));
    CHECK(path_loss(100.0, 4.0, 1e-3) == doctest::Approx(1e-11).epsilon(1e-12));
    CHECK(path_loss(1.0, 2.8, 1e-3) == doctest::Approx(1e-3).epsilon(1e-12));
    // Below the floor the loss saturates at p0.
    CHECK(path_loss(0.01, 2.8, 1e-3) == doctest::Approx(1e-3).epsilon(1e-12));
}

TEST_CASE("precoder Frobenius norm carries the transmit power") {
    SystemConfig cfg = small_config();
    cfg.tx_power_w = 2.5;
    auto stream = make_stream(cfg.seed, 0, StreamTag::precoder);
    const ComplexMatrix p = make_precoder(cfg, stream);
    REQUIRE(p.rows() == cfg.n_tx);
    REQUIRE(p.cols() == cfg.n_users);
    CHECK(p.squaredNorm() == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("dft precoder is deterministic and stream-independent") {
    SystemConfig cfg = small_config();
    cfg.precoder = PrecoderKind::dft;
    auto s1 = make_stream(1, 0, StreamTag::precoder);
    auto s2 = make_stream(99, 7, StreamTag::precoder);
    const ComplexMatrix p1 = make_precoder(cfg, s1);
    const ComplexMatrix p2 = make_precoder(cfg, s2);
    CHECK((p1 - p2).cwiseAbs().maxCoeff() == 0.0);
    CHECK(p1.squaredNorm() == doctest::Approx(cfg.tx_power_w).epsilon(1e-12));
}

TEST_CASE("sample_channels shapes and determinism") {
    SystemConfig cfg = small_config();
    const ChannelSet a = sample_channels(cfg, 3);
    const ChannelSet b = sample_channels(cfg, 3);
    REQUIRE(a.f.rows() == cfg.n_users);
    REQUIRE(a.f.cols() == cfg.n_tx);
    REQUIRE(a.h.rows() == cfg.n_users);
    REQUIRE(a.h.cols() == cfg.ris_elements());
    REQUIRE(a.g.rows() == cfg.ris_elements());
    REQUIRE(a.g.cols() == cfg.n_tx);
    REQUIRE(a.precoder.rows() == cfg.n_tx);
    REQUIRE(a.precoder.cols() == cfg.n_users);
    CHECK(a.trial_index == 3);
    // Same (seed, trial) reproduces bit-identically.
    CHECK((a.f - b.f).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.h - b.h).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.g - b.g).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.precoder - b.precoder).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.alpha_t == b.alpha_t);
}

TEST_CASE("different trials produce different channels") {
    SystemConfig cfg = small_config();
    const ChannelSet a = sample_channels(cfg, 0);
    const ChannelSet b = sample_channels(cfg, 1);
    CHECK((a.f - b.f).cwiseAbs().maxCoeff() > 1e-12);
    CHECK((a.g - b.g).cwiseAbs().maxCoeff() > 1e-12);
}

TEST_CASE("different seeds produce different channels") {
    SystemConfig cfg = small_config();
    SystemConfig cfg2 = cfg;
    cfg2.seed = cfg.seed + 1;
    const ChannelSet a = sample_channels(cfg, 0);
    const ChannelSet b = sample_channels(cfg2, 0);
    CHECK((a.f - b.f).cwiseAbs().maxCoeff() > 1e-12);
}

TEST_CASE("channel variances track the path-loss budget") {
    // Empirical second moments over many entries should sit near the
    // per-entry variance implied by the geometry.
    SystemConfig cfg;
    cfg.n_tx = 16;
    cfg.n_users = 16;
    cfg.ris_lx = 8;
    cfg.ris_ly = 8;
    cfg.seed = 5;
    const double d_rd = (cfg.pos_ris - cfg.pos_dfbs).norm();
    const double d_ur = (cfg.pos_users - cfg.pos_ris).norm();
    const double d_ud = (cfg.pos_users - cfg.pos_dfbs).norm();
    const double p_rd = path_loss(d_rd, cfg.alpha_rd, cfg.p0);
    const double p_ur = path_loss(d_ur, cfg.alpha_ur, cfg.p0);
    const double p_ud = path_loss(d_ud, cfg.alpha_ud, cfg.p0);

    double m_g = 0.0, m_h = 0.0, m_f = 0.0;
    const int trials = 40;
    for (int t = 0; t < trials; ++t) {
        const ChannelSet ch = sample_channels(cfg, static_cast<std::uint64_t>(t));
        m_g += ch.g.squaredNorm() / static_cast<double>(ch.g.size());
        m_h += ch.h.squaredNorm() / static_cast<double>(ch.h.size());
        m_f += ch.f.squaredNorm() / static_cast<double>(ch.f.size());
    }
    m_g /= trials;
    m_h /= trials;
    m_f /= trials;
    CHECK(m_g == doctest::Approx(p_rd).epsilon(0.05));
    CHECK(m_h == doctest::Approx(p_ur).epsilon(0.05));
    CHECK(m_f == doctest::Approx(p_ud).epsilon(0.05));
}

TEST_CASE("alpha_t is unit-variance complex gaussian") {
    // The radar-leg attenuation is absorbed into the reflectivity draw, so
    // its second moment is 1 regardless of geometry.
    SystemConfig cfg = small_config();
    double m = 0.0;
    Complex mean(0.0, 0.0);
    const int trials = 4000;
    for (int t = 0; t < trials; ++t) {
        const Complex a = sample_channels(cfg, static_cast<std::uint64_t>(t)).alpha_t;
        m += std::norm(a);
        mean += a;
    }
    m /= trials;
    mean /= static_cast<double>(trials);
    CHECK(m == doctest::Approx(1.0).epsilon(0.1));
    CHECK(std::abs(mean) < 0.1);
}

TEST_CASE("target direction flows into the steering fields") {
    SystemConfig cfg = small_config();
    const ChannelSet ch = sample_channels(cfg, 0);
    auto [th, tv] = doa_from_positions(cfg.pos_ris, cfg.pos_target);
    CHECK(ch.theta_h == doctest::Approx(th).epsilon(1e-12));
    CHECK(ch.theta_v == doctest::Approx(tv).epsilon(1e-12));
}

} // TEST_SUITE
