#include "bdris/selfcheck.hpp"

#include "bdris/baselines.hpp"
#include "bdris/errors.hpp"
#include "bdris/linalg.hpp"
#include "bdris/model.hpp"
#include "bdris/optimizer.hpp"
#include "bdris/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bdris {

namespace {

constexpr std::uint64_t kCheckSeed = 0xB0D1;

ComplexMatrix random_complex(Index rows, Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
            m(i, j) = Complex(n(rng), n(rng));
    return m;
}

ComplexVector random_unimodular(Index n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    ComplexVector v(n);
    for (Index i = 0; i < n; ++i)
        v(i) = std::polar(1.0, u(rng));
    return v;
}

// Deliberately wrong reconstruction: lower triangle only, upper left at zero.
ComplexMatrix lower_triangle_from_vech(const ComplexVector& v) {
    const Index n = side_from_vech_length(v.size());
    ComplexMatrix a = ComplexMatrix::Zero(n, n);
    Index k = 0;
    for (Index j = 0; j < n; ++j)
        for (Index i = j; i < n; ++i)
            a(i, j) = v(k++);
    return a;
}

struct Instance {
    ComplexMatrix f, h, g, p;
    ComplexVector a;
    Complex alpha_t;
    double sigma2_c = 2.5e-1;
    double sigma2_r = 4.0e-1;
};

Instance random_instance(Index l, Index n, Index k, std::mt19937_64& rng) {
    Instance inst;
    inst.g = random_complex(l, n, rng);
    inst.h = random_complex(k, l, rng);
    inst.f = random_complex(k, n, rng);
    inst.p = random_complex(n, k, rng);
    inst.a = random_unimodular(l, rng);
    inst.alpha_t = Complex(0.7, -0.4);
    return inst;
}

double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

CheckResult check_duplication(const std::string&) {
    auto rng = make_stream(kCheckSeed, 1, StreamTag::baseline);
    double worst = 0.0;
    for (Index n = 1; n <= 8; ++n) {
        const ComplexMatrix raw = random_complex(n, n, rng);
        const ComplexMatrix sym = raw + raw.transpose();
        const ComplexVector rebuilt = duplication_matrix(n).cast<Complex>() * vech(sym);
        worst = std::max(worst, (rebuilt - vec(sym)).cwiseAbs().maxCoeff());
    }
    return {"duplication-identity", worst == 0.0, worst,
            "vec(A) == D * vech(A) for symmetric A, exact"};
}

CheckResult check_lemma1(const std::string& fault) {
    auto rng = make_stream(kCheckSeed, 2, StreamTag::baseline);
    double worst = 0.0;
    for (Index l : {2, 3, 4}) {
        for (Index n : {2, 3}) {
            const Index k = 2;
            const Instance inst = random_instance(l, n, k, rng);
            LemmaTerms t = build_lemma1_terms(inst.f, inst.h, inst.g, inst.p, inst.sigma2_c,
                                              duplication_matrix(l));
            if (fault == "q-sign")
                t.q = -t.q;
            for (int rep = 0; rep < 5; ++rep) {
                const ComplexVector phi = random_unimodular(vech_length(l), rng);
                const ComplexMatrix phi_mat = symmetric_from_vech(phi);
                const double direct = snr_c_trace(
                    effective_channel(inst.f, inst.h, inst.g, phi_mat), inst.p, inst.sigma2_c);
                const double quad = snr_c_quadratic(phi, t);
                worst = std::max(worst, rel_err(quad, direct));
            }
        }
    }
    return {"lemma1-equivalence", worst <= 1e-9, worst,
            "quadratic communication SNR matches the trace form"};
}

CheckResult check_lemma2(const std::string& fault) {
    auto rng = make_stream(kCheckSeed, 3, StreamTag::baseline);
    double worst = 0.0;
    for (Index l : {2, 3, 4}) {
        const Index n = 3, k = 2;
        const Instance inst = random_instance(l, n, k, rng);
        for (int rep = 0; rep < 5; ++rep) {
            const ComplexVector phi = random_unimodular(vech_length(l), rng);
            const ComplexMatrix phi_mat = fault == "skip-duplication"
                                              ? lower_triangle_from_vech(phi)
                                              : symmetric_from_vech(phi);
            const ComplexMatrix qbar = build_qbar(phi_mat, inst.g, inst.a, inst.p, inst.alpha_t,
                                                  inst.sigma2_r, duplication_matrix(l));
            const double quad = real_checked(phi.dot(qbar * phi), "radar quadratic form");
            const double direct = snr_r_trace(
                radar_matrix(inst.g, symmetric_from_vech(phi), inst.a, inst.alpha_t), inst.p,
                inst.sigma2_r);
            worst = std::max(worst, rel_err(quad, direct));
        }
    }
    return {"lemma2-equivalence", worst <= 1e-9, worst,
            "quadratic radar SNR at the frozen surface matches the trace form"};
}

CheckResult check_swap(const std::string& fault) {
    auto rng = make_stream(kCheckSeed, 4, StreamTag::baseline);
    double worst = 0.0;
    for (Index l : {2, 3, 4}) {
        const Index n = 3, k = 2;
        const Instance inst = random_instance(l, n, k, rng);
        const RealMatrix d = duplication_matrix(l);
        for (int rep = 0; rep < 5; ++rep) {
            const ComplexVector phi = random_unimodular(vech_length(l), rng);
            const ComplexVector phi0 = random_unimodular(vech_length(l), rng);
            const ComplexMatrix qbar = build_qbar(symmetric_from_vech(phi0), inst.g, inst.a,
                                                  inst.p, inst.alpha_t, inst.sigma2_r, d);
            ComplexMatrix qbarbar = build_qbarbar(symmetric_from_vech(phi), inst.g, inst.a,
                                                  inst.p, inst.alpha_t, inst.sigma2_r, d);
            if (fault == "qbarbar-scalar")
                qbarbar *= std::norm(inst.alpha_t) / inst.sigma2_r;
            const double lhs = real_checked(phi.dot(qbar * phi), "swap lhs");
            const double rhs = real_checked(phi0.dot(qbarbar * phi0), "swap rhs");
            worst = std::max(worst, rel_err(rhs, lhs));
        }
    }
    return {"swap-identity", worst <= 1e-9, worst,
            "phi^H qbar(Phi0) phi == phi0^H qbarbar(Phi) phi0, radar scalar applied once"};
}

CheckResult check_uqp(const std::string&) {
    auto rng = make_stream(kCheckSeed, 5, StreamTag::baseline);
    double worst = 0.0;
    bool ok = true;
    for (int rep = 0; rep < 20; ++rep) {
        const Index m = 4 + rep % 7;
        const ComplexMatrix b = random_complex(m, m, rng);
        const ComplexMatrix a = b + b.adjoint();
        const UqpResult res = uqp_minimize(a, random_unimodular(m, rng), 1e-12, 200);
        for (std::size_t s = 1; s < res.objective_trace.size(); ++s) {
            const double slack = 1e-9 * (1.0 + std::abs(res.objective_trace[s - 1]));
            const double rise = res.objective_trace[s] - res.objective_trace[s - 1];
            worst = std::max(worst, rise);
            if (rise > slack)
                ok = false;
        }
    }
    return {"uqp-monotonicity", ok, worst,
            "shifted fixed-point iterations never increase the quadratic objective"};
}

CheckResult check_procrustes(const std::string&) {
    auto rng = make_stream(kCheckSeed, 6, StreamTag::baseline);
    double worst = 0.0;
    bool ok = true;
    for (int rep = 0; rep < 3; ++rep) {
        const ComplexMatrix x = random_complex(4, 4, rng);
        const ComplexMatrix u = nearest_unitary(x);
        const double unit_res = (u.adjoint() * u - ComplexMatrix::Identity(4, 4)).norm();
        if (unit_res > 1e-10)
            ok = false;
        const double best = (x - u).norm();
        for (int s = 0; s < 300; ++s) {
            ComplexMatrix v = random_complex(4, 4, rng);
            Eigen::HouseholderQR<ComplexMatrix> qr(v);
            const ComplexMatrix q = qr.householderQ();
            const double dist = (x - q).norm();
            worst = std::max(worst, best - dist);
            if (best > dist + 1e-12)
                ok = false;
        }
    }
    return {"procrustes-optimality", ok, worst,
            "nearest_unitary beats random unitaries in Frobenius distance"};
}

} // namespace

const std::vector<std::string>& selfcheck_names() {
    static const std::vector<std::string> names = {
        "duplication-identity", "lemma1-equivalence", "lemma2-equivalence",
        "swap-identity",        "uqp-monotonicity",   "procrustes-optimality",
    };
    return names;
}

std::vector<CheckResult> run_selfchecks(const std::string& inject_fault) {
    static const std::vector<std::string> faults = {"qbarbar-scalar", "skip-duplication",
                                                    "q-sign"};
    if (!inject_fault.empty() &&
        std::find(faults.begin(), faults.end(), inject_fault) == faults.end()) {
        std::string msg = "--inject-fault: unknown fault \"" + inject_fault + "\" (expected";
        for (const auto& f : faults)
            msg += " " + f;
        throw ConfigError(msg + ")");
    }
    std::vector<CheckResult> out;
    out.push_back(check_duplication(inject_fault));
    out.push_back(check_lemma1(inject_fault));
    out.push_back(check_lemma2(inject_fault));
    out.push_back(check_swap(inject_fault));
    out.push_back(check_uqp(inject_fault));
    out.push_back(check_procrustes(inject_fault));
    return out;
}

} // namespace bdris
