#ifndef PRONY_NUMERICS_HPP
#define PRONY_NUMERICS_HPP

#include <complex>
#include <span>

#include <Eigen/Core>

namespace prony::numerics {

/// Least-squares solution plus rank metadata. When the matrix is rank
/// deficient the minimum-norm solution is returned and the flag is set.
template <typename Scalar>
struct LsSolution {
    Eigen::Vector<Scalar, Eigen::Dynamic> x;
    Eigen::Index rank = 0;
    bool rank_deficient = false;
};

/// Lag matrix of the linear-prediction system: an (N-p) x p matrix with
/// T(i,j) = x[p-1+i-j], constant along every diagonal.
Eigen::MatrixXd build_toeplitz(std::span<const double> x, int p);

/// Minimize ||Ax - b||_2 via a complete orthogonal decomposition.
/// Requires A.rows() >= A.cols(); deterministic for fixed input.
LsSolution<double> solve_least_squares(const Eigen::MatrixXd& A,
                                       const Eigen::VectorXd& b);
LsSolution<std::complex<double>> solve_least_squares(const Eigen::MatrixXcd& A,
                                                     const Eigen::VectorXcd& b);

/// Classical total least squares: the right singular vector of [A | b]
/// for the smallest singular value, v = [v1; v2], gives x = -v1/v2.
/// Throws TlsError when |v2| is below tolerance (non-generic problem)
/// or when the input contains non-finite entries.
Eigen::VectorXd solve_total_least_squares(const Eigen::MatrixXd& A,
                                          const Eigen::VectorXd& b);
Eigen::VectorXcd solve_total_least_squares(const Eigen::MatrixXcd& A,
                                           const Eigen::VectorXcd& b);

/// Roots of sum_k coeffs[k] z^(n-k) (descending powers) as eigenvalues of
/// the balanced companion matrix. Exact leading zeros are stripped first;
/// an all-zero coefficient vector is invalid.
Eigen::VectorXcd polynomial_roots(std::span<const std::complex<double>> coeffs);
Eigen::VectorXcd polynomial_roots(std::span<const double> coeffs);

/// Sample standard deviation with modulus deviations,
/// sqrt(sum |v_i - mean|^2 / (n-1)); zero for a single element.
double sample_std(std::span<const std::complex<double>> v);
double sample_std(const Eigen::VectorXcd& v);
double sample_std(const Eigen::VectorXd& v);

} // namespace prony::numerics

#endif
