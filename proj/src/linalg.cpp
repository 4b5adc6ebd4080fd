#include "newton2pep/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace newton2pep {

namespace {

void require_square(const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument(std::string(what) + ": matrix is " + std::to_string(a.rows()) +
                                "x" + std::to_string(a.cols()) + ", expected square");
  }
}

}  // namespace

bool all_finite(const ComplexMatrix& a) {
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
    }
  }
  return true;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Complex det(const ComplexMatrix& a) {
  require_square(a, "det");
  if (a.rows() == 0) return Complex{1.0, 0.0};
  return a.partialPivLu().determinant();
}

Eigen::VectorXd singular_values(const ComplexMatrix& a) {
  if (a.size() == 0) return Eigen::VectorXd{};
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return svd.singularValues();
}

double smallest_singular_value(const ComplexMatrix& a) {
  require_square(a, "smallest_singular_value");
  if (a.rows() == 0) return 0.0;
  const Eigen::VectorXd s = singular_values(a);
  return s(s.size() - 1);
}

double hadamard_ratio(const ComplexMatrix& a) {
  require_square(a, "hadamard_ratio");
  if (a.rows() == 0) return 1.0;
  // Work in logs; the column-norm product overflows quickly for 30x30 blocks.
  double log_norms = 0.0;
  for (Index j = 0; j < a.cols(); ++j) {
    const double c = a.col(j).norm();
    if (c == 0.0) return 0.0;
    log_norms += std::log(c);
  }
  const auto lu = a.partialPivLu();
  const ComplexMatrix& packed = lu.matrixLU();
  double log_det = 0.0;
  for (Index i = 0; i < packed.rows(); ++i) {
    const double d = std::abs(packed(i, i));
    if (d == 0.0) return 0.0;
    log_det += std::log(d);
  }
  return std::min(1.0, std::exp(log_det - log_norms));
}

ComplexMatrix perfect_shuffle(Index m, Index n) {
  ComplexMatrix p = ComplexMatrix::Zero(m * n, m * n);
  for (Index i = 0; i < m; ++i) {
    for (Index k = 0; k < n; ++k) p(k * m + i, i * n + k) = 1.0;
  }
  return p;
}

Index GeneralizedEigenResult::finite_count() const {
  return static_cast<Index>(
      std::count_if(pairs.begin(), pairs.end(), [](const auto& p) { return p.value.has_value(); }));
}

std::vector<Complex> GeneralizedEigenResult::finite_values() const {
  std::vector<Complex> out;
  for (const auto& p : pairs) {
    if (p.value) out.push_back(*p.value);
  }
  return out;
}

GeneralizedEigenResult small_dense_eigen(const ComplexMatrix& a, const ComplexMatrix& b,
                                         double zero_tol) {
  require_square(a, "small_dense_eigen");
  require_square(b, "small_dense_eigen");
  if (a.rows() != b.rows()) {
    throw std::invalid_argument("small_dense_eigen: A and B differ in size");
  }
  const auto n = static_cast<lapack_int>(a.rows());
  GeneralizedEigenResult result;
  if (n == 0) return result;

  ComplexMatrix aw = a;
  ComplexMatrix bw = b;
  ComplexVector alpha(n);
  ComplexVector beta(n);
  ComplexMatrix vr(n, n);
  Complex dummy{};
  const lapack_int info = LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', 'V', n, aw.data(), n, bw.data(), n,
                                        alpha.data(), beta.data(), &dummy, 1, vr.data(), n);
  if (info != 0) {
    throw std::runtime_error("small_dense_eigen: zggev failed with info=" + std::to_string(info));
  }

  const double a_norm = a.norm();
  const double b_norm = b.norm();
  for (lapack_int k = 0; k < n; ++k) {
    GeneralizedEigenpair pair;
    pair.alpha = alpha(k);
    pair.beta = beta(k);
    pair.vector = vr.col(k);
    const bool beta_zero = std::abs(pair.beta) <= zero_tol * b_norm;
    const bool alpha_zero = std::abs(pair.alpha) <= zero_tol * a_norm;
    if (beta_zero && alpha_zero) result.singular_pencil = true;
    if (!beta_zero) pair.value = pair.alpha / pair.beta;
    result.pairs.push_back(std::move(pair));
  }
  return result;
}

std::vector<Complex> polynomial_roots(std::span<const Complex> coeffs_ascending, double trim_tol) {
  double scale = 0.0;
  for (const Complex& c : coeffs_ascending) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return {};

  Index degree = static_cast<Index>(coeffs_ascending.size()) - 1;
  while (degree > 0 && std::abs(coeffs_ascending[degree]) <= trim_tol * scale) --degree;
  if (degree <= 0) return {};

  const Complex lead = coeffs_ascending[degree];
  ComplexMatrix companion = ComplexMatrix::Zero(degree, degree);
  for (Index i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (Index i = 0; i < degree; ++i) companion(i, degree - 1) = -coeffs_ascending[i] / lead;

  Eigen::ComplexEigenSolver<ComplexMatrix> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("polynomial_roots: eigenvalue iteration did not converge");
  }
  const ComplexVector& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

}  // namespace newton2pep
