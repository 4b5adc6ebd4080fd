#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace newton2pep {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// True when every entry has finite real and imaginary parts.
bool all_finite(const ComplexMatrix& a);

/// Kronecker product, size (rA*rB) x (cA*cB).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Determinant by partially pivoted LU. Throws std::invalid_argument for
/// non-square input; the 0x0 determinant is 1.
Complex det(const ComplexMatrix& a);

/// All singular values, descending.
Eigen::VectorXd singular_values(const ComplexMatrix& a);

/// Smallest singular value of a square matrix.
double smallest_singular_value(const ComplexMatrix& a);

/// |det A| divided by the product of the column norms. Lies in [0, 1] by
/// Hadamard's inequality, so it measures how close A is to singular
/// independently of scaling. Zero columns give 0.
double hadamard_ratio(const ComplexMatrix& a);

/// Perfect-shuffle permutation P with P (A kron B) P^T = B kron A for
/// A of order m and B of order n.
ComplexMatrix perfect_shuffle(Index m, Index n);

/// One generalized eigenpair of (A, B): A v = lambda B v. `value` is empty
/// for infinite eigenvalues. alpha/beta are the raw QZ diagonal entries.
struct GeneralizedEigenpair {
  std::optional<Complex> value;
  Complex alpha;
  Complex beta;
  ComplexVector vector;
};

struct GeneralizedEigenResult {
  std::vector<GeneralizedEigenpair> pairs;
  // Set when some alpha and beta vanish together, i.e. A - lambda B has a
  // common null direction for every lambda.
  bool singular_pencil = false;

  Index finite_count() const;
  std::vector<Complex> finite_values() const;
};

/// Dense generalized eigenproblem for small complex pencils (QZ through
/// LAPACK zggev). An eigenvalue is reported infinite when
/// |beta| <= zero_tol * ||B||_F.
GeneralizedEigenResult small_dense_eigen(const ComplexMatrix& a, const ComplexMatrix& b,
                                         double zero_tol = 1e-12);

/// Roots of sum_k coeffs[k] z^k. Leading coefficients below
/// trim_tol * max|coeff| are dropped before forming the companion matrix.
std::vector<Complex> polynomial_roots(std::span<const Complex> coeffs_ascending,
                                      double trim_tol = 1e-13);

}  // namespace newton2pep
