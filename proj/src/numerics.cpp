#include "prony/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "prony/errors.hpp"

namespace prony::numerics {

namespace {

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
    return m.allFinite();
}

template <typename Scalar>
LsSolution<Scalar> solve_ls_impl(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A,
    const Eigen::Vector<Scalar, Eigen::Dynamic>& b) {
    if (A.rows() != b.size())
        throw InvalidArgument("solve_least_squares: A has " +
                              std::to_string(A.rows()) + " rows but b has " +
                              std::to_string(b.size()) + " entries");
    if (A.rows() < A.cols())
        throw InvalidArgument("solve_least_squares: underdetermined system");

    // Complete orthogonal decomposition: rank revealing, and yields the
    // minimum-norm solution when the matrix is rank deficient.
    Eigen::CompleteOrthogonalDecomposition<
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>>
        cod(A);
    LsSolution<Scalar> sol;
    sol.x = cod.solve(b);
    sol.rank = cod.rank();
    sol.rank_deficient = sol.rank < A.cols();
    return sol;
}

template <typename Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> solve_tls_impl(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A,
    const Eigen::Vector<Scalar, Eigen::Dynamic>& b) {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    if (A.rows() != b.size())
        throw InvalidArgument("solve_total_least_squares: size mismatch");
    if (A.rows() < A.cols() + 1)
        throw InvalidArgument(
            "solve_total_least_squares: needs rows >= cols + 1");
    if (!all_finite(A) || !all_finite(b))
        throw TlsError("solve_total_least_squares: non-finite input");

    Matrix aug(A.rows(), A.cols() + 1);
    aug.leftCols(A.cols()) = A;
    aug.col(A.cols()) = b;

    Eigen::JacobiSVD<Matrix> svd(aug, Eigen::ComputeThinV);
    const auto v = svd.matrixV().col(A.cols()); // smallest singular value
    const double v_last = std::abs(v(A.cols()));

    constexpr double kTol = 1e-12;
    if (v_last < kTol)
        throw TlsError("solve_total_least_squares: no TLS solution "
                       "(singular vector has vanishing last component)");

    return -v.head(A.cols()) / v(A.cols());
}

// Parlett-Reinsch balancing with powers of two, so eigenvalues of badly
// scaled companion matrices stay accurate without perturbing them.
void balance_in_place(Eigen::MatrixXcd& m) {
    const Eigen::Index n = m.rows();
    const double gamma = 0.9;
    bool changed = true;
    while (changed) {
        changed = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            double row_norm = 0.0, col_norm = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                row_norm += std::abs(m(i, j));
                col_norm += std::abs(m(j, i));
            }
            if (row_norm == 0.0 || col_norm == 0.0) continue;
            int exponent = 0;
            std::frexp(row_norm / col_norm, &exponent);
            exponent /= 2;
            if (exponent == 0) continue;
            const double scaled_col = std::ldexp(col_norm, exponent);
            const double scaled_row = std::ldexp(row_norm, -exponent);
            if (scaled_col + scaled_row < gamma * (col_norm + row_norm)) {
                changed = true;
                const double up = std::ldexp(1.0, exponent);
                const double down = std::ldexp(1.0, -exponent);
                for (Eigen::Index j = 0; j < n; ++j) {
                    if (j == i) continue;
                    m(i, j) *= down;
                    m(j, i) *= up;
                }
            }
        }
    }
}

Eigen::VectorXcd roots_impl(std::span<const std::complex<double>> coeffs) {
    // Strip exact leading zeros.
    std::size_t first = 0;
    while (first < coeffs.size() && coeffs[first] == 0.0) ++first;
    if (first == coeffs.size())
        throw InvalidArgument("polynomial_roots: all coefficients are zero");

    const std::size_t degree = coeffs.size() - first - 1;
    if (degree == 0)
        throw InvalidArgument("polynomial_roots: constant polynomial has no roots");

    const std::complex<double> lead = coeffs[first];
    if (degree == 1)
        return Eigen::VectorXcd::Constant(1, -coeffs[first + 1] / lead);

    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(degree, degree);
    for (std::size_t i = 0; i + 1 < degree; ++i) companion(i + 1, i) = 1.0;
    for (std::size_t i = 0; i < degree; ++i)
        companion(i, degree - 1) = -coeffs[coeffs.size() - 1 - i] / lead;

    balance_in_place(companion);

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success)
        throw Error("polynomial_roots: eigenvalue iteration failed");

    // Canonical order (lexicographic by real, then imaginary part) so the
    // component indexing downstream is stable.
    Eigen::VectorXcd roots = solver.eigenvalues();
    std::sort(roots.begin(), roots.end(),
              [](const std::complex<double>& a, const std::complex<double>& b) {
                  if (a.real() != b.real()) return a.real() < b.real();
                  return a.imag() < b.imag();
              });
    return roots;
}

} // namespace

Eigen::MatrixXd build_toeplitz(std::span<const double> x, int p) {
    const auto n = static_cast<long>(x.size());
    if (p < 1 || p >= n)
        throw InvalidArgument("build_toeplitz: order " + std::to_string(p) +
                              " out of range for " + std::to_string(n) +
                              " samples");
    for (double v : x)
        if (!std::isfinite(v))
            throw InvalidArgument("build_toeplitz: non-finite sample");

    Eigen::MatrixXd t(n - p, p);
    for (long i = 0; i < n - p; ++i)
        for (long j = 0; j < p; ++j) t(i, j) = x[static_cast<std::size_t>(p - 1 + i - j)];
    return t;
}

LsSolution<double> solve_least_squares(const Eigen::MatrixXd& A,
                                       const Eigen::VectorXd& b) {
    return solve_ls_impl<double>(A, b);
}

LsSolution<std::complex<double>> solve_least_squares(const Eigen::MatrixXcd& A,
                                                     const Eigen::VectorXcd& b) {
    return solve_ls_impl<std::complex<double>>(A, b);
}

Eigen::VectorXd solve_total_least_squares(const Eigen::MatrixXd& A,
                                          const Eigen::VectorXd& b) {
    return solve_tls_impl<double>(A, b);
}

Eigen::VectorXcd solve_total_least_squares(const Eigen::MatrixXcd& A,
                                           const Eigen::VectorXcd& b) {
    return solve_tls_impl<std::complex<double>>(A, b);
}

Eigen::VectorXcd polynomial_roots(std::span<const std::complex<double>> coeffs) {
    return roots_impl(coeffs);
}

Eigen::VectorXcd polynomial_roots(std::span<const double> coeffs) {
    std::vector<std::complex<double>> c(coeffs.begin(), coeffs.end());
    return roots_impl(c);
}

double sample_std(std::span<const std::complex<double>> v) {
    if (v.empty())
        throw InvalidArgument("sample_std: empty input");
    if (v.size() == 1) return 0.0;

    std::complex<double> mean(0.0, 0.0);
    for (const auto& z : v) mean += z;
    mean /= static_cast<double>(v.size());

    double acc = 0.0;
    for (const auto& z : v) acc += std::norm(z - mean);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

double sample_std(const Eigen::VectorXcd& v) {
    return sample_std(std::span<const std::complex<double>>(v.data(),
                                                            static_cast<std::size_t>(v.size())));
}

double sample_std(const Eigen::VectorXd& v) {
    std::vector<std::complex<double>> c(v.data(), v.data() + v.size());
    return sample_std(std::span<const std::complex<double>>(c));
}

} // namespace prony::numerics
