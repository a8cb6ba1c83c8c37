#include "prony/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "prony/errors.hpp"
#include "prony/numerics.hpp"

namespace prony {

namespace {

// Saturate non-finite values to the largest finite double, keeping the
// sign bit.
double saturate(double v) {
    return std::isfinite(v) ? v : std::copysign(DBL_MAX, v);
}

// Complex multiply whose partial products and sums saturate instead of
// overflowing, so no Inf - Inf can turn into NaN.
std::complex<double> saturating_mul(std::complex<double> a,
                                    std::complex<double> b) {
    const double ac = saturate(a.real() * b.real());
    const double bd = saturate(a.imag() * b.imag());
    const double ad = saturate(a.real() * b.imag());
    const double bc = saturate(a.imag() * b.real());
    return {saturate(ac - bd), saturate(ad + bc)};
}

double normalize_phase(double theta) {
    return theta == -std::numbers::pi ? std::numbers::pi : theta;
}

// Re-throw stage failures with the stage name prepended, keeping the
// exception type where it matters to callers.
template <typename F>
auto run_stage(const char* stage, F&& f) {
    const auto tag = [stage](const std::string& what) {
        return std::string(stage) + ": " + what;
    };
    try {
        return f();
    } catch (const TlsError& e) {
        throw TlsError(tag(e.what()));
    } catch (const InvalidArgument& e) {
        throw InvalidArgument(tag(e.what()));
    } catch (const Error& e) {
        throw Error(tag(e.what()));
    }
}

} // namespace

SolveMethod parse_solve_method(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (lower == "classic") return SolveMethod::Classic;
    if (lower == "ls") return SolveMethod::Ls;
    if (lower == "tls") return SolveMethod::Tls;
    throw InvalidArgument("unknown solve method '" + std::string(name) +
                          "' (expected classic, ls or tls)");
}

std::string to_string(SolveMethod method) {
    switch (method) {
    case SolveMethod::Classic: return "classic";
    case SolveMethod::Ls: return "ls";
    case SolveMethod::Tls: return "tls";
    }
    return "?";
}

ARModel fit_ar_coefficients(const SampledSignal& x, int p, SolveMethod method) {
    const auto n = static_cast<long>(x.size());
    if (p < 1)
        throw InvalidArgument("fit_ar_coefficients: order must be >= 1");
    if (method == SolveMethod::Classic) {
        if (n != 2L * p)
            throw InvalidArgument(
                "fit_ar_coefficients: classic method needs exactly 2*p samples, got " +
                std::to_string(n) + " for p = " + std::to_string(p));
    } else if (n <= 2L * p) {
        throw InvalidArgument(
            "fit_ar_coefficients: " + to_string(method) +
            " method needs more than 2*p samples, got " + std::to_string(n) +
            " for p = " + std::to_string(p));
    }

    const Eigen::MatrixXd t = numerics::build_toeplitz(x.samples, p);
    const Eigen::VectorXd rhs =
        Eigen::Map<const Eigen::VectorXd>(x.samples.data() + p, n - p);

    ARModel model;
    model.order = p;
    if (method == SolveMethod::Tls) {
        model.a = numerics::solve_total_least_squares(t, -rhs);
    } else {
        model.a = -numerics::solve_least_squares(t, rhs).x;
    }
    model.c.resize(p + 1);
    model.c(0) = 1.0;
    model.c.tail(p) = model.a;
    return model;
}

Eigen::VectorXcd characteristic_roots(const ARModel& model) {
    return numerics::polynomial_roots(
        std::span<const double>(model.c.data(), static_cast<std::size_t>(model.c.size())));
}

Eigen::VectorXcd adjust(const Eigen::VectorXcd& values,
                        const AdjustmentPolicy& policy) {
    if (values.size() < 1)
        throw InvalidArgument("adjust: empty input");
    if (policy.target == AdjustmentPolicy::Target::None ||
        policy.multiplier == 0.0)
        return values;
    if (policy.multiplier < 0.0)
        throw InvalidArgument("adjust: multiplier must be >= 0");

    double delta = policy.multiplier * numerics::sample_std(values);
    if (policy.normalize_by_order) delta /= static_cast<double>(values.size());
    return values.array() - delta;
}

Dynamics extract_dynamics(const Eigen::VectorXcd& roots, double ts) {
    if (!(ts > 0.0))
        throw InvalidArgument("extract_dynamics: sample period must be > 0");

    Dynamics dyn;
    dyn.damping.resize(roots.size());
    dyn.frequency.resize(roots.size());
    for (Eigen::Index i = 0; i < roots.size(); ++i) {
        dyn.damping(i) = saturate(std::log(std::abs(roots(i))) / ts);
        dyn.frequency(i) = std::atan2(roots(i).imag(), roots(i).real()) /
                           (2.0 * std::numbers::pi * ts);
    }
    return dyn;
}

Eigen::MatrixXcd build_vandermonde(const Eigen::VectorXcd& roots, long length) {
    if (length < roots.size())
        throw InvalidArgument("build_vandermonde: length shorter than root count");

    Eigen::MatrixXcd z(length, roots.size());
    for (Eigen::Index i = 0; i < roots.size(); ++i) {
        std::complex<double> power(1.0, 0.0);
        for (long n = 0; n < length; ++n) {
            z(n, i) = power;
            power = saturating_mul(power, roots(i));
        }
    }
    return z;
}

Eigen::VectorXcd solve_residues(const Eigen::MatrixXcd& Z,
                                const SampledSignal& x, SolveMethod method) {
    const long rows = Z.rows();
    if (rows > static_cast<long>(x.size()))
        throw InvalidArgument("solve_residues: matrix has more rows than samples");

    Eigen::VectorXcd rhs(rows);
    for (long i = 0; i < rows; ++i) rhs(i) = x.samples[static_cast<std::size_t>(i)];

    if (method == SolveMethod::Tls) {
        if (!Z.allFinite())
            throw TlsError("solve_residues: indeterminate form, "
                           "matrix has NaN or Inf entries");
        return numerics::solve_total_least_squares(Z, rhs);
    }

    // Column equilibration: saturated Vandermonde columns span ~300 orders
    // of magnitude, which QR cannot survive unscaled. The least-squares
    // minimizer itself is unchanged by the diagonal scaling.
    Eigen::VectorXd scale(Z.cols());
    for (Eigen::Index j = 0; j < Z.cols(); ++j) {
        const double m = Z.col(j).cwiseAbs().maxCoeff();
        scale(j) = (m > 0.0 && std::isfinite(m)) ? m : 1.0;
    }
    const Eigen::MatrixXcd scaled = Z * scale.cwiseInverse().asDiagonal();
    Eigen::VectorXcd h = numerics::solve_least_squares(scaled, rhs).x;
    h.array() /= scale.array();
    return h;
}

PronyComponents prony_decompose(const SampledSignal& x, int p,
                                SolveMethod method,
                                const AdjustmentPolicy& policy) {
    ARModel model = run_stage("fit_ar_coefficients", [&] {
        return fit_ar_coefficients(x, p, method);
    });

    if (policy.target == AdjustmentPolicy::Target::Coefficients) {
        const Eigen::VectorXcd adjusted =
            run_stage("adjust", [&] { return adjust(model.a.cast<std::complex<double>>(), policy); });
        model.a = adjusted.real();
        model.c.tail(model.order) = model.a;
    }

    Eigen::VectorXcd roots = run_stage("characteristic_roots", [&] {
        return characteristic_roots(model);
    });
    if (policy.target == AdjustmentPolicy::Target::Roots)
        roots = run_stage("adjust", [&] { return adjust(roots, policy); });

    const Dynamics dyn = run_stage("extract_dynamics", [&] {
        return extract_dynamics(roots, x.ts);
    });

    const Eigen::MatrixXcd z = run_stage("build_vandermonde", [&] {
        return build_vandermonde(roots, static_cast<long>(x.size()));
    });
    const Eigen::VectorXcd h = run_stage("solve_residues", [&] {
        return solve_residues(z, x, method);
    });

    PronyComponents components;
    components.roots = std::move(roots);
    components.residues = h;
    components.damping = dyn.damping;
    components.frequency = dyn.frequency;
    components.ts = x.ts;
    components.amplitude.resize(h.size());
    components.phase.resize(h.size());
    for (Eigen::Index i = 0; i < h.size(); ++i) {
        components.amplitude(i) = std::abs(h(i));
        components.phase(i) = normalize_phase(std::atan2(h(i).imag(), h(i).real()));
    }
    return components;
}

SampledSignal reconstruct(const PronyComponents& components, long n) {
    if (n < 1)
        throw InvalidArgument("reconstruct: sample count must be >= 1");
    const Eigen::Index p = components.roots.size();

    std::vector<double> samples(static_cast<std::size_t>(n));
    std::vector<std::complex<double>> power(static_cast<std::size_t>(p), {1.0, 0.0});
    for (long k = 0; k < n; ++k) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < p; ++i) {
            auto& pw = power[static_cast<std::size_t>(i)];
            const auto term = saturating_mul(pw, components.residues(i));
            acc = saturate(acc + term.real());
            pw = saturating_mul(pw, components.roots(i));
        }
        samples[static_cast<std::size_t>(k)] = acc;
    }
    return SampledSignal(std::move(samples), components.ts);
}

} // namespace prony
