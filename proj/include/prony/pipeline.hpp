#ifndef PRONY_PIPELINE_HPP
#define PRONY_PIPELINE_HPP

#include <string>
#include <string_view>

#include <Eigen/Core>

#include "prony/signal.hpp"

namespace prony {

/// How the linear-prediction and residue systems are solved. Classic is
/// the square case and requires exactly N = 2p samples.
enum class SolveMethod { Classic, Ls, Tls };

/// Case-insensitive parse of "classic" / "ls" / "tls".
SolveMethod parse_solve_method(std::string_view name);
std::string to_string(SolveMethod method);

/// Autoregression fit: coefficients a and the monic characteristic
/// polynomial c = [1, a1, ..., ap].
struct ARModel {
    int order = 0;
    Eigen::VectorXd a; // length order
    Eigen::VectorXd c; // length order + 1, c[0] = 1
};

/// The deviation-proportional correction applied between the AR fit and
/// the rest of the pipeline. None behaves exactly like multiplier 0.
struct AdjustmentPolicy {
    enum class Target { None, Coefficients, Roots };

    Target target = Target::None;
    double multiplier = 0.0;      // k >= 0
    bool normalize_by_order = false; // divide the shift by the vector length

    static AdjustmentPolicy none() { return {}; }
    static AdjustmentPolicy coefficients(double k, bool normalize = false) {
        return {Target::Coefficients, k, normalize};
    }
    static AdjustmentPolicy roots(double k, bool normalize = false) {
        return {Target::Roots, k, normalize};
    }
};

/// Complete per-root description of the fitted exponential components.
struct PronyComponents {
    Eigen::VectorXcd roots;
    Eigen::VectorXcd residues;
    Eigen::VectorXd amplitude;    // |h_i|
    Eigen::VectorXd damping;      // 1/s
    Eigen::VectorXd frequency;    // Hz
    Eigen::VectorXd phase;        // radians, in (-pi, pi]
    double ts = 1.0;
};

/// Solve the linear-prediction system T a = -x[p..N-1] for the AR
/// coefficients. Classic requires N = 2p exactly; Ls/Tls require N > 2p.
ARModel fit_ar_coefficients(const SampledSignal& x, int p, SolveMethod method);

/// Roots of the characteristic polynomial.
Eigen::VectorXcd characteristic_roots(const ARModel& model);

/// Subtract k * sample_std(values) (optionally divided by the vector
/// length) uniformly from every entry. Identity for Target::None or k=0.
Eigen::VectorXcd adjust(const Eigen::VectorXcd& values,
                        const AdjustmentPolicy& policy);

/// Per-root damping ln|r|/ts and frequency atan2(Im r, Re r)/(2 pi ts).
/// Non-finite damping (root at zero) is clamped to +-DBL_MAX by sign.
struct Dynamics {
    Eigen::VectorXd damping;
    Eigen::VectorXd frequency;
};
Dynamics extract_dynamics(const Eigen::VectorXcd& roots, double ts);

/// Z(n, i) = roots[i]^n for n = 0..length-1. Overflowing entries saturate
/// to +-DBL_MAX componentwise, so the matrix is always finite.
Eigen::MatrixXcd build_vandermonde(const Eigen::VectorXcd& roots, long length);

/// Solve Z h ~= x[0..L-1] for the complex residues (least squares for
/// Classic/Ls, total least squares for Tls). Tls refuses matrices with
/// non-finite entries, mirroring the SVD indeterminate-form guard.
Eigen::VectorXcd solve_residues(const Eigen::MatrixXcd& Z,
                                const SampledSignal& x, SolveMethod method);

/// The full pipeline: AR fit, optional adjustment, rooting, dynamics,
/// Vandermonde solve. Errors are annotated with the failing stage.
PronyComponents prony_decompose(const SampledSignal& x, int p,
                                SolveMethod method,
                                const AdjustmentPolicy& policy);

/// grecons[n] = Re(sum_i h_i r_i^n), saturated to the largest finite
/// value on overflow.
SampledSignal reconstruct(const PronyComponents& components, long n);

} // namespace prony

#endif
