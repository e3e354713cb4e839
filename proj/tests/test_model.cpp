#include "bdris/channel.hpp"
#include "bdris/errors.hpp"
#include "bdris/model.hpp"
#include "bdris/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace bdris;

namespace {

ComplexMatrix random_complex(Index rows, Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
            m(i, j) = Complex(n(rng), n(rng));
    return m;
}

ComplexVector random_phases(Index n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * 3.14159265358979323846);
    ComplexVector v(n);
    for (Index i = 0; i < n; ++i)
        v(i) = std::polar(1.0, u(rng));
    return v;
}

// vec(diag(x)) = S x; the diagonal-surface counterpart of the duplication matrix.
RealMatrix selection_matrix(Index l) {
    RealMatrix s = RealMatrix::Zero(l * l, l);
    for (Index i = 0; i < l; ++i)
        s(i * l + i, i) = 1.0;
    return s;
}

struct Instance {
    ComplexMatrix f, h, g, p;
    ComplexVector a;
    Complex alpha_t;
};

Instance random_instance(Index k, Index n, Index l, std::mt19937_64& rng) {
    Instance in;
    in.f = random_complex(k, n, rng);
    in.h = random_complex(k, l, rng);
    in.g = random_complex(l, n, rng);
    in.p = random_complex(n, k, rng);
    in.a = random_phases(l, rng);
    in.alpha_t = random_complex(1, 1, rng)(0, 0);
    return in;
}

} // namespace

TEST_SUITE("model") {

TEST_CASE("effective_channel identity collapse") {
    auto rng = make_stream(21, 0, StreamTag::channels);
    const ComplexMatrix f = random_complex(2, 3, rng);
    const ComplexMatrix h = random_complex(2, 4, rng);
    const ComplexMatrix g = random_complex(4, 3, rng);
    SUBCASE("zero surface leaves the direct link") {
        const ComplexMatrix c = effective_channel(f, h, g, ComplexMatrix::Zero(4, 4));
        CHECK((c - f).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("identity surface adds h*g") {
        const ComplexMatrix c = effective_channel(f, h, g, ComplexMatrix::Identity(4, 4));
        CHECK((c - (f + h * g)).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("radar_matrix structure") {
    auto rng = make_stream(22, 0, StreamTag::channels);
    const Index l = 4, n = 3;
    const ComplexMatrix g = random_complex(l, n, rng);
    const ComplexVector a = random_phases(l, rng);
    const ComplexMatrix phi = symmetric_from_vech(random_phases(vech_length(l), rng));
    SUBCASE("zero reflectivity kills the response") {
        const ComplexMatrix r = radar_matrix(g, phi, a, Complex(0.0, 0.0));
        CHECK(r.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("identity collapse") {
        const ComplexMatrix r = radar_matrix(ComplexMatrix::Identity(l, l),
                                             ComplexMatrix::Identity(l, l), a,
                                             Complex(2.0, -1.0));
        const ComplexMatrix want = Complex(2.0, -1.0) * (a * a.transpose());
        CHECK((r - want).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("rank is at most one") {
        const ComplexMatrix r = radar_matrix(g, phi, a, Complex(1.0, 0.5));
        const auto sv = svd(r).singular_values;
        REQUIRE(sv.size() == n);
        CHECK(sv(1) < 1e-12 * sv(0));
    }
}

TEST_CASE("trace SNR on a hand case") {
    // ||M P||_F^2 / sigma2 with M = I, P = diag(1, 2): (1 + 4) / 0.5 = 10.
    ComplexMatrix m = ComplexMatrix::Identity(2, 2);
    ComplexMatrix p = ComplexMatrix::Zero(2, 2);
    p(0, 0) = 1.0;
    p(1, 1) = 2.0;
    CHECK(snr_c_trace(m, p, 0.5) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(snr_r_trace(m, p, 2.0) == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("communication quadratic form equals the trace form (symmetric surface)") {
    auto rng = make_stream(23, 0, StreamTag::channels);
    for (int rep = 0; rep < 30; ++rep) {
        const Index l = 2 + rep % 3, k = 2 + rep % 2, n = 2 + (rep / 2) % 2;
        const Instance in = random_instance(k, n, l, rng);
        const double sigma2 = 0.3;
        const RealMatrix d = duplication_matrix(l);
        const LemmaTerms t = build_lemma1_terms(in.f, in.h, in.g, in.p, sigma2, d);
        const ComplexVector phi = random_phases(vech_length(l), rng);
        const ComplexMatrix surface = symmetric_from_vech(phi);
        const double direct = snr_c_trace(effective_channel(in.f, in.h, in.g, surface),
                                          in.p, sigma2);
        const double quad = snr_c_quadratic(phi, t);
        CHECK(std::abs(quad - direct) <= 1e-9 * std::max(1.0, std::abs(direct)));
    }
}

TEST_CASE("communication quadratic form equals the trace form (diagonal surface)") {
    auto rng = make_stream(24, 0, StreamTag::channels);
    for (int rep = 0; rep < 10; ++rep) {
        const Index l = 3, k = 2, n = 2;
        const Instance in = random_instance(k, n, l, rng);
        const double sigma2 = 0.7;
        const LemmaTerms t = build_lemma1_terms(in.f, in.h, in.g, in.p, sigma2,
                                                selection_matrix(l));
        const ComplexVector x = random_phases(l, rng);
        const ComplexMatrix surface = x.asDiagonal();
        const double direct = snr_c_trace(effective_channel(in.f, in.h, in.g, surface),
                                          in.p, sigma2);
        const double quad = snr_c_quadratic(x, t);
        CHECK(std::abs(quad - direct) <= 1e-9 * std::max(1.0, std::abs(direct)));
    }
}

TEST_CASE("q_tilde is Hermitian and PSD") {
    auto rng = make_stream(25, 0, StreamTag::channels);
    const Instance in = random_instance(3, 2, 3, rng);
    const LemmaTerms t = build_lemma1_terms(in.f, in.h, in.g, in.p, 1.0,
                                            duplication_matrix(3));
    CHECK((t.q_tilde - t.q_tilde.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(t.q_tilde);
    CHECK(es.eigenvalues().minCoeff() > -1e-10 * std::max(1.0, es.eigenvalues().maxCoeff()));
}

TEST_CASE("radar quadratic form equals the trace form at phi0 == phi") {
    auto rng = make_stream(26, 0, StreamTag::channels);
    for (int rep = 0; rep < 30; ++rep) {
        const Index l = 2 + rep % 3, k = 2, n = 2 + rep % 2;
        const Instance in = random_instance(k, n, l, rng);
        const double sigma2 = 0.4;
        const RealMatrix d = duplication_matrix(l);
        const ComplexVector phi = random_phases(vech_length(l), rng);
        const ComplexMatrix surface = symmetric_from_vech(phi);
        const ComplexMatrix qbar = build_qbar(surface, in.g, in.a, in.p, in.alpha_t,
                                              sigma2, d);
        const double direct = snr_r_trace(radar_matrix(in.g, surface, in.a, in.alpha_t),
                                          in.p, sigma2);
        const double quad = real_checked(phi.dot(qbar * phi), "quad");
        CHECK(std::abs(quad - direct) <= 1e-9 * std::max(1.0, std::abs(direct)));
        CHECK((qbar - qbar.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("swap identity holds for independent surfaces") {
    auto rng = make_stream(27, 0, StreamTag::channels);
    for (int rep = 0; rep < 30; ++rep) {
        const Index l = 2 + rep % 3, k = 2, n = 2;
        const Instance in = random_instance(k, n, l, rng);
        const double sigma2 = 0.9;
        const RealMatrix d = duplication_matrix(l);
        const ComplexVector phi = random_phases(vech_length(l), rng);
        const ComplexVector phi0 = random_phases(vech_length(l), rng);
        const ComplexMatrix s = symmetric_from_vech(phi);
        const ComplexMatrix s0 = symmetric_from_vech(phi0);
        const ComplexMatrix qbar0 = build_qbar(s0, in.g, in.a, in.p, in.alpha_t, sigma2, d);
        const ComplexMatrix qbarbar = build_qbarbar(s, in.g, in.a, in.p, in.alpha_t, sigma2, d);
        const Complex lhs = phi.dot(qbar0 * phi);
        const Complex rhs = phi0.dot(qbarbar * phi0);
        CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("zero reflectivity zeroes both radar forms") {
    auto rng = make_stream(28, 0, StreamTag::channels);
    Instance in = random_instance(2, 2, 3, rng);
    in.alpha_t = Complex(0.0, 0.0);
    const RealMatrix d = duplication_matrix(3);
    const ComplexMatrix s = symmetric_from_vech(random_phases(6, rng));
    CHECK(build_qbar(s, in.g, in.a, in.p, in.alpha_t, 1.0, d).cwiseAbs().maxCoeff() == 0.0);
    CHECK(build_qbarbar(s, in.g, in.a, in.p, in.alpha_t, 1.0, d).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("cached-term overloads agree with the explicit builders") {
    SystemConfig cfg;
    cfg.n_tx = 3;
    cfg.n_users = 2;
    cfg.ris_lx = 2;
    cfg.ris_ly = 2;
    cfg.seed = 9;
    const ChannelSet ch = sample_channels(cfg, 0);
    const RealMatrix d = duplication_matrix(cfg.ris_elements());
    const LemmaTerms t = build_lemma_terms(ch, cfg, d);
    auto rng = make_stream(29, 0, StreamTag::channels);
    const ComplexMatrix s = symmetric_from_vech(random_phases(t.q.size(), rng));
    const ComplexMatrix a1 = build_qbar(s, t);
    const ComplexMatrix a2 = build_qbar(s, ch.g, t.steering, ch.precoder,
                                        ch.alpha_t, cfg.sigma2_r_w, d);
    const ComplexMatrix b1 = build_qbarbar(s, t);
    const ComplexMatrix b2 = build_qbarbar(s, ch.g, t.steering, ch.precoder,
                                           ch.alpha_t, cfg.sigma2_r_w, d);
    CHECK((a1 - a2).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, a1.cwiseAbs().maxCoeff()));
    CHECK((b1 - b2).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, b1.cwiseAbs().maxCoeff()));
}

TEST_CASE("weighted objective recombines the two trace SNRs") {
    SystemConfig cfg;
    cfg.n_tx = 3;
    cfg.n_users = 2;
    cfg.ris_lx = 2;
    cfg.ris_ly = 2;
    cfg.beta = 0.3;
    cfg.seed = 10;
    const ChannelSet ch = sample_channels(cfg, 1);
    const RealMatrix d = duplication_matrix(cfg.ris_elements());
    const LemmaTerms t = build_lemma_terms(ch, cfg, d);
    auto rng = make_stream(30, 0, StreamTag::channels);
    const ComplexVector phi = random_phases(t.q.size(), rng);
    const ComplexMatrix s = symmetric_from_vech(phi);
    const ComplexMatrix qbar0 = build_qbar(s, t);

    const ComplexVector a = steering_vector(ch.theta_h, ch.theta_v, cfg.ris_lx, cfg.ris_ly,
                                            cfg.wavelength(), cfg.spacing());
    CHECK((a - t.steering).cwiseAbs().maxCoeff() == 0.0);
    const double snr_c = snr_c_trace(effective_channel(ch.f, ch.h, ch.g, s),
                                     ch.precoder, cfg.sigma2_c_w);
    const double snr_r = snr_r_trace(radar_matrix(ch.g, s, t.steering, ch.alpha_t),
                                     ch.precoder, cfg.sigma2_r_w);
    const double want = cfg.beta * snr_r + (1.0 - cfg.beta) * snr_c;
    const double got = objective_full(phi, t, qbar0, cfg.beta);
    CHECK(std::abs(got - want) <= 1e-9 * std::max(1.0, std::abs(want)));
}

TEST_CASE("surrogate at phi0 == phi equals the variable objective") {
    SystemConfig cfg;
    cfg.n_tx = 2;
    cfg.n_users = 2;
    cfg.ris_lx = 2;
    cfg.ris_ly = 1;
    cfg.seed = 12;
    const ChannelSet ch = sample_channels(cfg, 0);
    const RealMatrix d = duplication_matrix(cfg.ris_elements());
    const LemmaTerms t = build_lemma_terms(ch, cfg, d);
    auto rng = make_stream(31, 0, StreamTag::channels);
    const ComplexVector phi = random_phases(t.q.size(), rng);
    const ComplexMatrix qbar0 = build_qbar(symmetric_from_vech(phi), t);
    const double a = surrogate_objective(phi, phi, t, 0.4);
    const double b = objective_variable(phi, t, qbar0, 0.4);
    CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)));
}

TEST_CASE("expand_to_matrix inverts both expansions") {
    auto rng = make_stream(32, 0, StreamTag::channels);
    SUBCASE("duplication gives the symmetric surface") {
        const ComplexVector phi = random_phases(vech_length(3), rng);
        const ComplexMatrix got = expand_to_matrix(phi, duplication_matrix(3));
        CHECK((got - symmetric_from_vech(phi)).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("selection gives the diagonal surface") {
        const ComplexVector x = random_phases(3, rng);
        const ComplexMatrix got = expand_to_matrix(x, selection_matrix(3));
        CHECK((got - ComplexMatrix(x.asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
    }
}

} // TEST_SUITE
