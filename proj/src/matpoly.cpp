#include "newton2pep/matpoly.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace newton2pep {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

bool NewtonNodes::is_zero() const {
  const Complex zero{};
  return alpha1 == zero && alpha2 == zero && beta1 == zero && beta2 == zero;
}

bool NewtonNodes::is_finite() const {
  return finite(alpha1) && finite(alpha2) && finite(beta1) && finite(beta2);
}

NewtonScalars eval_newton_scalars(const NewtonNodes& nodes, Complex lambda, Complex mu) {
  NewtonScalars s;
  s.n0 = 1.0;
  s.n1 = lambda - nodes.alpha1;
  s.n2 = s.n1 * (lambda - nodes.alpha2);
  s.m0 = 1.0;
  s.m1 = mu - nodes.beta1;
  s.m2 = s.m1 * (mu - nodes.beta2);
  return s;
}

MatrixPoly2::MatrixPoly2(CoeffArray coeffs, Basis basis, const NewtonNodes& nodes)
    : coeffs_(std::move(coeffs)), basis_(basis), nodes_(nodes) {
  const Index n = coeffs_[0].rows();
  if (n < 1) throw std::invalid_argument("MatrixPoly2: block size must be at least 1");
  for (int k = 0; k < 6; ++k) {
    const ComplexMatrix& c = coeffs_[k];
    if (c.rows() != n || c.cols() != n) {
      throw std::invalid_argument("MatrixPoly2: coefficient " + std::string(kCoeffNames[k]) +
                                  " is " + std::to_string(c.rows()) + "x" +
                                  std::to_string(c.cols()) + ", expected " + std::to_string(n) +
                                  "x" + std::to_string(n));
    }
    if (!all_finite(c)) {
      throw std::invalid_argument("MatrixPoly2: coefficient " + std::string(kCoeffNames[k]) +
                                  " has non-finite entries");
    }
  }
  if (!nodes_.is_finite()) throw std::invalid_argument("MatrixPoly2: non-finite Newton nodes");
}

MatrixPoly2 MatrixPoly2::monomial(CoeffArray coeffs) {
  return MatrixPoly2(std::move(coeffs), Basis::monomial, NewtonNodes{});
}

MatrixPoly2 MatrixPoly2::newton(CoeffArray coeffs, const NewtonNodes& nodes) {
  return MatrixPoly2(std::move(coeffs), Basis::newton, nodes);
}

bool MatrixPoly2::compatible_nodes(const NewtonNodes& other) const { return nodes_ == other; }

Eigen::Vector3cd lambda3(Complex lambda, Complex mu) { return {lambda, mu, 1.0}; }

Eigen::Matrix<Complex, 6, 1> lambda6(Complex lambda, Complex mu) {
  Eigen::Matrix<Complex, 6, 1> v;
  v << lambda * lambda, lambda * mu, mu * mu, lambda, mu, 1.0;
  return v;
}

Eigen::Vector3cd newton3(const NewtonNodes& nodes, Complex lambda, Complex mu) {
  const NewtonScalars s = eval_newton_scalars(nodes, lambda, mu);
  return {s.n1, s.m1, s.n0};
}

Eigen::Matrix<Complex, 6, 1> newton6(const NewtonNodes& nodes, Complex lambda, Complex mu) {
  const NewtonScalars s = eval_newton_scalars(nodes, lambda, mu);
  Eigen::Matrix<Complex, 6, 1> v;
  v << s.n2, s.n1 * s.m1, s.m2, s.n1, s.m1, s.n0;
  return v;
}

Eigen::Matrix<Complex, 6, 1> basis_weights(const MatrixPoly2& p, Complex lambda, Complex mu) {
  return p.basis() == Basis::monomial ? lambda6(lambda, mu) : newton6(p.nodes(), lambda, mu);
}

ComplexMatrix eval_poly(const MatrixPoly2& p, Complex lambda, Complex mu) {
  const auto w = basis_weights(p, lambda, mu);
  ComplexMatrix out = ComplexMatrix::Zero(p.size(), p.size());
  for (int k = 0; k < 6; ++k) out += w(k) * p.coeffs()[k];
  return out;
}

MatrixPoly2 newton_to_monomial(const MatrixPoly2& p) {
  if (p.basis() != Basis::newton) {
    throw std::invalid_argument("newton_to_monomial: polynomial is not Newton-tagged");
  }
  const auto& [a1, a2, b1, b2] = p.nodes();
  const ComplexMatrix& c20 = p.coeff(Coeff::a20);
  const ComplexMatrix& c11 = p.coeff(Coeff::a11);
  const ComplexMatrix& c02 = p.coeff(Coeff::a02);
  const ComplexMatrix& c10 = p.coeff(Coeff::a10);
  const ComplexMatrix& c01 = p.coeff(Coeff::a01);
  const ComplexMatrix& c00 = p.coeff(Coeff::a00);

  // n2 = l^2 - (a1+a2) l + a1 a2,  n1 m1 = l m - b1 l - a1 m + a1 b1,
  // m2 = m^2 - (b1+b2) m + b1 b2,  n1 = l - a1,  m1 = m - b1.
  CoeffArray out;
  out[0] = c20;
  out[1] = c11;
  out[2] = c02;
  out[3] = c10 - (a1 + a2) * c20 - b1 * c11;
  out[4] = c01 - a1 * c11 - (b1 + b2) * c02;
  out[5] = c00 + (a1 * a2) * c20 + (a1 * b1) * c11 + (b1 * b2) * c02 - a1 * c10 - b1 * c01;
  return MatrixPoly2::monomial(std::move(out));
}

MatrixPoly2 monomial_partner(const MatrixPoly2& p) { return MatrixPoly2::monomial(p.coeffs()); }

MatrixPoly2 as_newton(const MatrixPoly2& p) {
  if (p.basis() == Basis::newton) return p;
  return MatrixPoly2::newton(p.coeffs(), NewtonNodes{});
}

}  // namespace newton2pep
