#pragma once

#include "newton2pep/linalg.hpp"

#include <array>
#include <string_view>

namespace newton2pep {

/// Interpolation nodes of the Newton basis. Nodes may coincide.
struct NewtonNodes {
  Complex alpha1{};
  Complex alpha2{};
  Complex beta1{};
  Complex beta2{};

  bool is_zero() const;
  bool is_finite() const;
  friend bool operator==(const NewtonNodes&, const NewtonNodes&) = default;
};

/// n0..n2 in lambda and m0..m2 in mu.
struct NewtonScalars {
  Complex n0, n1, n2;
  Complex m0, m1, m2;
};

NewtonScalars eval_newton_scalars(const NewtonNodes& nodes, Complex lambda, Complex mu);

enum class Basis { monomial, newton };

/// Coefficient slots. The order matches the six-term basis vectors
/// (lambda^2, lambda mu, mu^2, lambda, mu, 1) and (n2, n1 m1, m2, n1, m1, n0).
enum class Coeff : int { a20 = 0, a11 = 1, a02 = 2, a10 = 3, a01 = 4, a00 = 5 };

inline constexpr std::array<std::string_view, 6> kCoeffNames = {"A20", "A11", "A02",
                                                                "A10", "A01", "A00"};

using CoeffArray = std::array<ComplexMatrix, 6>;

/// Quadratic bivariate matrix polynomial with n x n coefficients on the six
/// basis functions of total degree <= 2. Immutable after construction.
class MatrixPoly2 {
 public:
  /// Throws std::invalid_argument unless all six blocks are n x n, n >= 1,
  /// and every entry is finite.
  static MatrixPoly2 monomial(CoeffArray coeffs);
  static MatrixPoly2 newton(CoeffArray coeffs, const NewtonNodes& nodes);

  Index size() const { return coeffs_[0].rows(); }
  Basis basis() const { return basis_; }
  /// Zero nodes for monomial polynomials.
  const NewtonNodes& nodes() const { return nodes_; }
  const ComplexMatrix& coeff(Coeff c) const { return coeffs_[static_cast<int>(c)]; }
  const CoeffArray& coeffs() const { return coeffs_; }

  /// A monomial polynomial behaves as a Newton polynomial with all nodes
  /// zero, so it is compatible only with zero nodes.
  bool compatible_nodes(const NewtonNodes& other) const;

 private:
  MatrixPoly2(CoeffArray coeffs, Basis basis, const NewtonNodes& nodes);

  CoeffArray coeffs_;
  Basis basis_;
  NewtonNodes nodes_;
};

// Basis vectors.
Eigen::Vector3cd lambda3(Complex lambda, Complex mu);
Eigen::Matrix<Complex, 6, 1> lambda6(Complex lambda, Complex mu);
Eigen::Vector3cd newton3(const NewtonNodes& nodes, Complex lambda, Complex mu);
Eigen::Matrix<Complex, 6, 1> newton6(const NewtonNodes& nodes, Complex lambda, Complex mu);

/// The six scalars weighting p's coefficients at (lambda, mu).
Eigen::Matrix<Complex, 6, 1> basis_weights(const MatrixPoly2& p, Complex lambda, Complex mu);

ComplexMatrix eval_poly(const MatrixPoly2& p, Complex lambda, Complex mu);

/// Expands the Newton products into monomials. Throws std::invalid_argument
/// when p is not Newton-tagged.
MatrixPoly2 newton_to_monomial(const MatrixPoly2& p);

/// Same coefficients reinterpreted in the monomial basis.
MatrixPoly2 monomial_partner(const MatrixPoly2& p);

/// Monomial polynomial viewed as a Newton polynomial with zero nodes;
/// Newton polynomials are returned unchanged.
MatrixPoly2 as_newton(const MatrixPoly2& p);

}  // namespace newton2pep
