#include <doctest.h>

#include <cfloat>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "prony/errors.hpp"
#include "prony/pipeline.hpp"

using namespace prony;
using Complex = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> damped_cosines(
    const std::vector<std::array<double, 4>>& comps, std::size_t n, double ts) {
    std::vector<double> x(n, 0.0);
    for (std::size_t k = 0; k < n; ++k)
        for (const auto& [amp, alpha, freq, phase] : comps)
            x[k] += amp * std::exp(alpha * k * ts) *
                    std::cos(2.0 * kPi * freq * k * ts + phase);
    return x;
}

bool contains_root(const Eigen::VectorXcd& roots, Complex value, double tol) {
    for (Eigen::Index i = 0; i < roots.size(); ++i)
        if (std::abs(roots(i) - value) < tol) return true;
    return false;
}

} // namespace

TEST_CASE("parse_solve_method is case-insensitive and validated") {
    CHECK(parse_solve_method("LS") == SolveMethod::Ls);
    CHECK(parse_solve_method("tLs") == SolveMethod::Tls);
    CHECK(parse_solve_method("Classic") == SolveMethod::Classic);
    CHECK_THROWS_AS((void)parse_solve_method("fancy"), InvalidArgument);
}

TEST_CASE("fit_ar_coefficients recovers a single growing exponential") {
    const SampledSignal x({1, 2, 4, 8}, 1.0);
    const ARModel model = fit_ar_coefficients(x, 1, SolveMethod::Ls);
    CHECK(model.a(0) == doctest::Approx(-2.0).epsilon(1e-12));
    REQUIRE(model.c.size() == 2);
    CHECK(model.c(0) == 1.0);
    CHECK(model.c(1) == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("fit_ar_coefficients on a constant signal") {
    const SampledSignal x({1, 1, 1, 1}, 1.0);
    const ARModel model = fit_ar_coefficients(x, 1, SolveMethod::Ls);
    CHECK(model.a(0) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("fit_ar_coefficients classic case for 3^n + 1") {
    const SampledSignal x({2, 4, 10, 28}, 1.0);
    const ARModel model = fit_ar_coefficients(x, 2, SolveMethod::Classic);
    CHECK(model.c(0) == doctest::Approx(1.0));
    CHECK(model.c(1) == doctest::Approx(-4.0).epsilon(1e-10));
    CHECK(model.c(2) == doctest::Approx(3.0).epsilon(1e-10));

    const Eigen::VectorXcd roots = characteristic_roots(model);
    CHECK(contains_root(roots, {3.0, 0.0}, 1e-8));
    CHECK(contains_root(roots, {1.0, 0.0}, 1e-8));
}

TEST_CASE("fit_ar_coefficients validates sample counts per method") {
    const SampledSignal x({1, 2, 4, 8, 16, 32}, 1.0);
    CHECK_THROWS_AS((void)fit_ar_coefficients(x, 2, SolveMethod::Classic),
                    InvalidArgument);
    CHECK_THROWS_AS((void)fit_ar_coefficients(x, 3, SolveMethod::Ls),
                    InvalidArgument);
    CHECK_THROWS_AS((void)fit_ar_coefficients(x, 0, SolveMethod::Ls),
                    InvalidArgument);
}

TEST_CASE("characteristic_roots of simple models") {
    ARModel linear;
    linear.order = 1;
    linear.a = Eigen::VectorXd{{-2.0}};
    linear.c = Eigen::VectorXd{{1.0, -2.0}};
    const Eigen::VectorXcd r = characteristic_roots(linear);
    REQUIRE(r.size() == 1);
    CHECK(std::abs(r(0) - Complex(2.0, 0.0)) < 1e-14);
}

TEST_CASE("oscillator roots sit on the unit circle at quarter rate") {
    ARModel model;
    model.order = 2;
    model.a = Eigen::VectorXd{{0.0, 1.0}};
    model.c = Eigen::VectorXd{{1.0, 0.0, 1.0}};
    const Eigen::VectorXcd roots = characteristic_roots(model);
    const Dynamics dyn = extract_dynamics(roots, 1.0);
    for (Eigen::Index i = 0; i < roots.size(); ++i) {
        CHECK(std::abs(roots(i)) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(dyn.frequency(i)) == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(dyn.damping(i) == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("adjust leaves constant vectors untouched") {
    Eigen::VectorXcd v(3);
    v << Complex(5, 0), Complex(5, 0), Complex(5, 0);
    const Eigen::VectorXcd out = adjust(v, AdjustmentPolicy::coefficients(3.0));
    for (int i = 0; i < 3; ++i) CHECK(out(i) == v(i));
}

TEST_CASE("adjust subtracts the scaled standard deviation uniformly") {
    Eigen::VectorXcd v(2);
    v << Complex(2, 0), Complex(4, 0);

    const Eigen::VectorXcd plain = adjust(v, AdjustmentPolicy::roots(1.0));
    CHECK(plain(0).real() == doctest::Approx(2.0 - 1.41421356).epsilon(1e-7));
    CHECK(plain(1).real() == doctest::Approx(4.0 - 1.41421356).epsilon(1e-7));

    const Eigen::VectorXcd normalized =
        adjust(v, AdjustmentPolicy::roots(1.0, true));
    CHECK(normalized(0).real() == doctest::Approx(2.0 - 0.70710678).epsilon(1e-7));
    CHECK(normalized(1).real() == doctest::Approx(4.0 - 0.70710678).epsilon(1e-7));
}

TEST_CASE("adjust with zero multiplier or None target is the identity") {
    Eigen::VectorXcd v(2);
    v << Complex(1.25, -0.5), Complex(-3.75, 2.0);
    const Eigen::VectorXcd zero_k = adjust(v, AdjustmentPolicy::roots(0.0));
    const Eigen::VectorXcd none = adjust(v, AdjustmentPolicy::none());
    for (int i = 0; i < 2; ++i) {
        CHECK(zero_k(i) == v(i));
        CHECK(none(i) == v(i));
    }
}

TEST_CASE("extract_dynamics maps roots to damping and frequency") {
    Eigen::VectorXcd roots(3);
    roots << Complex(1, 0), Complex(0, 1), Complex(2, 0);
    const Dynamics dyn = extract_dynamics(roots, 1.0);
    CHECK(dyn.damping(0) == doctest::Approx(0.0));
    CHECK(dyn.frequency(0) == doctest::Approx(0.0));
    CHECK(dyn.damping(1) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(dyn.frequency(1) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(dyn.damping(2) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("extract_dynamics clamps the root at zero") {
    Eigen::VectorXcd roots(1);
    roots << Complex(0, 0);
    const Dynamics dyn = extract_dynamics(roots, 1.0);
    CHECK(dyn.damping(0) == -DBL_MAX);
    CHECK(std::isfinite(dyn.frequency(0)));
}

TEST_CASE("build_vandermonde on simple roots") {
    Eigen::VectorXcd ones(1);
    ones << Complex(1, 0);
    const Eigen::MatrixXcd z1 = build_vandermonde(ones, 3);
    for (int i = 0; i < 3; ++i) CHECK(z1(i, 0) == Complex(1, 0));

    Eigen::VectorXcd twos(1);
    twos << Complex(2, 0);
    const Eigen::MatrixXcd z2 = build_vandermonde(twos, 4);
    CHECK(z2(3, 0) == Complex(8, 0));

    Eigen::VectorXcd pm(2);
    pm << Complex(1, 0), Complex(-1, 0);
    const Eigen::MatrixXcd z3 = build_vandermonde(pm, 4);
    for (int i = 0; i < 4; ++i) {
        CHECK(z3(i, 0) == Complex(1, 0));
        CHECK(z3(i, 1) == Complex(i % 2 == 0 ? 1 : -1, 0));
    }

    CHECK_THROWS_AS((void)build_vandermonde(pm, 1), InvalidArgument);
}

TEST_CASE("build_vandermonde saturates instead of overflowing") {
    Eigen::VectorXcd huge(1);
    huge << Complex(1e200, 0);
    const Eigen::MatrixXcd z = build_vandermonde(huge, 5);
    CHECK(z(1, 0).real() == 1e200);
    CHECK(z(2, 0).real() == DBL_MAX); // 1e400 clamps
    CHECK(z(4, 0).real() == DBL_MAX);
    CHECK(z.allFinite());

    Eigen::VectorXcd negative(1);
    negative << Complex(-1e200, 0);
    const Eigen::MatrixXcd zn = build_vandermonde(negative, 4);
    CHECK(zn(2, 0).real() == DBL_MAX);
    CHECK(zn(3, 0).real() == -DBL_MAX);
}

TEST_CASE("solve_residues on an exactly consistent system") {
    Eigen::VectorXcd twos(1);
    twos << Complex(2, 0);
    const Eigen::MatrixXcd z = build_vandermonde(twos, 4);
    const SampledSignal x({1, 2, 4, 8}, 1.0);
    const Eigen::VectorXcd h = solve_residues(z, x, SolveMethod::Ls);
    REQUIRE(h.size() == 1);
    CHECK(std::abs(h(0) - Complex(1, 0)) < 1e-12);
}

TEST_CASE("solve_residues splits an alternation into two components") {
    Eigen::VectorXcd roots(2);
    roots << Complex(1, 0), Complex(-1, 0);
    const Eigen::MatrixXcd z = build_vandermonde(roots, 4);
    const SampledSignal x({2, 0, 2, 0}, 1.0);
    const Eigen::VectorXcd h = solve_residues(z, x, SolveMethod::Ls);
    CHECK(std::abs(h(0) - Complex(1, 0)) < 1e-12);
    CHECK(std::abs(h(1) - Complex(1, 0)) < 1e-12);
}

TEST_CASE("solve_residues is linear in the signal") {
    Eigen::VectorXcd roots(2);
    roots << Complex(0.9, 0.1), Complex(0.9, -0.1);
    const Eigen::MatrixXcd z = build_vandermonde(roots, 6);
    std::vector<double> base{1.0, 1.8, 1.6, 1.2, 0.7, 0.3};
    std::vector<double> scaled(base);
    for (double& v : scaled) v *= 5.0;

    const Eigen::VectorXcd h1 =
        solve_residues(z, SampledSignal(base, 1.0), SolveMethod::Ls);
    const Eigen::VectorXcd h5 =
        solve_residues(z, SampledSignal(scaled, 1.0), SolveMethod::Ls);
    CHECK((h5 - 5.0 * h1).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("solve_residues guards the TLS path against indeterminate forms") {
    Eigen::MatrixXcd z(3, 1);
    z << Complex(1, 0), Complex(std::nan(""), 0), Complex(1, 0);
    const SampledSignal x({1, 2, 3}, 1.0);
    CHECK_THROWS_AS((void)solve_residues(z, x, SolveMethod::Tls), TlsError);
}

TEST_CASE("prony_decompose resolves a pure cosine") {
    const std::vector<double> x =
        damped_cosines({{0.5, 0.0, 0.1, 0.0}, {0.5, 0.0, -0.1, 0.0}}, 16, 1.0);
    const PronyComponents c = prony_decompose(SampledSignal(x, 1.0), 2,
                                              SolveMethod::Ls,
                                              AdjustmentPolicy::none());
    REQUIRE(c.roots.size() == 2);
    for (int i = 0; i < 2; ++i) {
        CHECK(std::abs(c.frequency(i)) == doctest::Approx(0.1).epsilon(1e-8));
        CHECK(c.damping(i) == doctest::Approx(0.0).epsilon(1e-8));
        CHECK(c.amplitude(i) == doctest::Approx(0.5).epsilon(1e-8));
    }
    CHECK(c.frequency(0) * c.frequency(1) < 0.0); // conjugate pair
}

TEST_CASE("prony_decompose minimal classic case") {
    const PronyComponents c =
        prony_decompose(SampledSignal({1, 2}, 1.0), 1, SolveMethod::Classic,
                        AdjustmentPolicy::none());
    CHECK(std::abs(c.roots(0) - Complex(2, 0)) < 1e-12);
    CHECK(c.amplitude(0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero-multiplier adjustment reproduces the unadjusted pipeline") {
    const std::vector<double> x =
        damped_cosines({{1.0, -0.03, 0.12, 0.4}}, 24, 1.0);
    const SampledSignal signal(x, 1.0);
    const PronyComponents plain = prony_decompose(
        signal, 2, SolveMethod::Ls, AdjustmentPolicy::none());
    const PronyComponents zero_k = prony_decompose(
        signal, 2, SolveMethod::Ls, AdjustmentPolicy::roots(0.0));
    CHECK(plain.roots == zero_k.roots);
    CHECK(plain.residues == zero_k.residues);
}

TEST_CASE("prony_decompose annotates stage failures") {
    try {
        (void)prony_decompose(SampledSignal({1, 2, 3}, 1.0), 5, SolveMethod::Ls,
                              AdjustmentPolicy::none());
        FAIL("expected an exception");
    } catch (const InvalidArgument& e) {
        CHECK(std::string(e.what()).find("fit_ar_coefficients") !=
              std::string::npos);
    }
}

TEST_CASE("reconstruct powers of two") {
    PronyComponents c;
    c.roots = Eigen::VectorXcd{{Complex(2, 0)}};
    c.residues = Eigen::VectorXcd{{Complex(1, 0)}};
    c.ts = 1.0;
    const SampledSignal out = reconstruct(c, 4);
    const std::vector<double> expected{1, 2, 4, 8};
    for (int i = 0; i < 4; ++i)
        CHECK(out.samples[static_cast<std::size_t>(i)] ==
              doctest::Approx(expected[static_cast<std::size_t>(i)]).epsilon(1e-14));
}

TEST_CASE("reconstruct a conjugate pair gives a cosine") {
    PronyComponents c;
    c.roots = Eigen::VectorXcd{{Complex(0, 1), Complex(0, -1)}};
    c.residues = Eigen::VectorXcd{{Complex(0.5, 0), Complex(0.5, 0)}};
    c.ts = 1.0;
    const SampledSignal out = reconstruct(c, 4);
    CHECK(out.samples[0] == doctest::Approx(1.0));
    CHECK(out.samples[1] == doctest::Approx(0.0));
    CHECK(out.samples[2] == doctest::Approx(-1.0));
    CHECK(out.samples[3] == doctest::Approx(0.0));
}

TEST_CASE("noiseless decompositions reconstruct the signal exactly") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> amp(0.5, 2.0);
    std::uniform_real_distribution<double> damp(-0.1, 0.0);
    std::uniform_real_distribution<double> phase(-kPi, kPi);

    for (int trial = 0; trial < 10; ++trial) {
        double f1 = 0.05 + 0.4 * (static_cast<double>(rng() % 1000) / 1000.0);
        double f2 = 0.05 + 0.4 * (static_cast<double>(rng() % 1000) / 1000.0);
        if (std::abs(f1 - f2) < 0.03) f2 = f1 + 0.05;
        const std::vector<double> x = damped_cosines(
            {{amp(rng), damp(rng), f1, phase(rng)},
             {amp(rng), damp(rng), f2, phase(rng)}},
            64, 1.0);
        const SampledSignal signal(x, 1.0);
        const PronyComponents c = prony_decompose(signal, 4, SolveMethod::Ls,
                                                  AdjustmentPolicy::none());
        const SampledSignal rec = reconstruct(c, 64);

        double err = 0.0, ref = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            err += (rec.samples[i] - x[i]) * (rec.samples[i] - x[i]);
            ref += x[i] * x[i];
        }
        CHECK(std::sqrt(err / ref) < 1e-6);
    }
}

TEST_CASE("tls method recovers noiseless signals end to end") {
    const std::vector<double> x = damped_cosines(
        {{1.2, -0.03, 0.09, 0.5}, {0.8, -0.06, 0.27, -1.1}}, 48, 1.0);
    const SampledSignal signal(x, 1.0);
    const PronyComponents c = prony_decompose(signal, 4, SolveMethod::Tls,
                                              AdjustmentPolicy::none());
    const SampledSignal rec = reconstruct(c, 48);
    double err = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        err += (rec.samples[i] - x[i]) * (rec.samples[i] - x[i]);
        ref += x[i] * x[i];
    }
    CHECK(std::sqrt(err / ref) < 1e-6);
}

TEST_CASE("classic method with N = 2p also recovers exactly") {
    const std::vector<double> x = damped_cosines(
        {{1.0, -0.02, 0.1, 0.3}, {0.7, -0.05, 0.3, -0.8}}, 8, 1.0);
    const SampledSignal signal(x, 1.0);
    const PronyComponents c = prony_decompose(signal, 4, SolveMethod::Classic,
                                              AdjustmentPolicy::none());
    const SampledSignal rec = reconstruct(c, 8);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(rec.samples[i] == doctest::Approx(x[i]).epsilon(1e-7));
}

TEST_CASE("roots of real signals close under conjugation") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> x(40);
        for (double& v : x) v = dist(rng);
        const PronyComponents c = prony_decompose(SampledSignal(x, 1.0), 4,
                                                  SolveMethod::Ls,
                                                  AdjustmentPolicy::none());
        for (Eigen::Index i = 0; i < c.roots.size(); ++i)
            CHECK(contains_root(c.roots, std::conj(c.roots(i)), 1e-8));
    }
}

TEST_CASE("scaling the signal scales residues and leaves dynamics alone") {
    const std::vector<double> x =
        damped_cosines({{1.0, -0.04, 0.1, 0.2}, {0.5, -0.01, 0.3, -0.7}}, 48, 1.0);
    std::vector<double> scaled(x);
    for (double& v : scaled) v *= 5.0;

    const PronyComponents base = prony_decompose(
        SampledSignal(x, 1.0), 4, SolveMethod::Ls, AdjustmentPolicy::none());
    const PronyComponents big = prony_decompose(
        SampledSignal(scaled, 1.0), 4, SolveMethod::Ls, AdjustmentPolicy::none());

    // Conjugate partners can swap index between the two runs; compare
    // components by nearest root instead.
    std::vector<bool> used(4, false);
    for (Eigen::Index i = 0; i < 4; ++i) {
        Eigen::Index match = -1;
        double best = 1e300;
        for (Eigen::Index j = 0; j < 4; ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            const double d = std::abs(big.roots(j) - base.roots(i));
            if (d < best) {
                best = d;
                match = j;
            }
        }
        REQUIRE(match >= 0);
        used[static_cast<std::size_t>(match)] = true;
        CHECK(best < 1e-8);
        CHECK(std::abs(big.damping(match) - base.damping(i)) < 1e-8);
        CHECK(std::abs(big.frequency(match) - base.frequency(i)) < 1e-8);
        CHECK(std::abs(big.residues(match) - 5.0 * base.residues(i)) < 1e-8);
        CHECK(big.amplitude(match) ==
              doctest::Approx(5.0 * base.amplitude(i)).epsilon(1e-8));
    }
}

TEST_CASE("phases stay inside (-pi, pi]") {
    // A negated cosine has phase pi exactly; the normalized angle must
    // come out as +pi, never -pi.
    std::vector<double> x(20);
    for (std::size_t k = 0; k < x.size(); ++k)
        x[k] = -std::cos(2.0 * kPi * 0.1 * static_cast<double>(k));
    const PronyComponents c = prony_decompose(SampledSignal(x, 1.0), 2,
                                              SolveMethod::Ls,
                                              AdjustmentPolicy::none());
    for (Eigen::Index i = 0; i < c.phase.size(); ++i) {
        CHECK(c.phase(i) > -kPi);
        CHECK(c.phase(i) <= kPi);
        CHECK(std::abs(c.phase(i)) == doctest::Approx(kPi).epsilon(1e-8));
    }
}

TEST_CASE("prony_decompose is bit-deterministic") {
    const std::vector<double> x =
        damped_cosines({{1.0, -0.05, 0.08, 0.0}, {0.6, -0.02, 0.21, 0.0}}, 50, 1.0);
    const SampledSignal signal(x, 1.0);
    const AdjustmentPolicy policy = AdjustmentPolicy::coefficients(1.0);
    const PronyComponents a = prony_decompose(signal, 4, SolveMethod::Ls, policy);
    const PronyComponents b = prony_decompose(signal, 4, SolveMethod::Ls, policy);
    CHECK(a.roots == b.roots);
    CHECK(a.residues == b.residues);
    CHECK(a.amplitude == b.amplitude);
    CHECK(a.damping == b.damping);
    CHECK(a.frequency == b.frequency);
    CHECK(a.phase == b.phase);
}

TEST_CASE("dynamics stay finite even for extreme adjusted roots") {
    // A large uniform shift can push roots far outside the unit circle;
    // every reported quantity must still be finite.
    const std::vector<double> x =
        damped_cosines({{1.0, -0.05, 0.08, 0.0}}, 40, 1.0);
    const PronyComponents c =
        prony_decompose(SampledSignal(x, 1.0), 2, SolveMethod::Ls,
                        AdjustmentPolicy::coefficients(50.0));
    CHECK(c.damping.allFinite());
    CHECK(c.frequency.allFinite());
    CHECK(c.amplitude.allFinite());
    const SampledSignal rec = reconstruct(c, 40);
    for (double v : rec.samples) CHECK(std::isfinite(v));
}
