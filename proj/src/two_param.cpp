#include "newton2pep/two_param.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace newton2pep {

namespace {

ComplexMatrix identity(Index n) { return ComplexMatrix::Identity(n, n); }

bool complex_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

Complex unit_root(int k, int n) {
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / n);
}

// Right null vector of a square matrix when it is numerically rank deficient.
std::optional<ComplexVector> null_vector(const ComplexMatrix& a) {
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) {
    if (a.cols() == 0) return std::nullopt;
    ComplexVector e = ComplexVector::Zero(a.cols());
    e(0) = 1.0;
    return e;
  }
  if (s(s.size() - 1) > 1e-12 * s(0)) return std::nullopt;
  return ComplexVector(svd.matrixV().col(a.cols() - 1));
}

// Univariate coefficients (ascending in lambda) of p(., mu).
std::vector<Complex> lambda_coeffs(const BivariatePolynomial& p, Complex mu) {
  std::vector<Complex> out(p.degree + 1, Complex{});
  for (int a = 0; a <= p.degree; ++a) {
    Complex acc{};
    for (int b = p.degree - a; b >= 0; --b) acc = acc * mu + p.coeffs(a, b);
    out[a] = acc;
  }
  return out;
}

// Highest lambda power whose mu-polynomial coefficient is not negligible.
int lambda_degree(const BivariatePolynomial& p) {
  const double scale = p.coeffs.cwiseAbs().maxCoeff();
  for (int a = p.degree; a > 0; --a) {
    if (p.coeffs.row(a).cwiseAbs().maxCoeff() > 1e-12 * scale) return a;
  }
  return 0;
}

ComplexMatrix sylvester(const std::vector<Complex>& f, int df, const std::vector<Complex>& g,
                        int dg) {
  const int size = df + dg;
  ComplexMatrix s = ComplexMatrix::Zero(size, size);
  for (int i = 0; i < dg; ++i) {
    for (int a = 0; a <= df; ++a) s(i, i + (df - a)) = f[a];
  }
  for (int i = 0; i < df; ++i) {
    for (int a = 0; a <= dg; ++a) s(dg + i, i + (dg - a)) = g[a];
  }
  return s;
}

}  // namespace

QtepPair::QtepPair(MatrixPoly2 q1, MatrixPoly2 q2) : q1_(std::move(q1)), q2_(std::move(q2)) {
  if (!(q1_.nodes() == q2_.nodes())) {
    throw std::invalid_argument("QtepPair: the two polynomials use different Newton nodes");
  }
}

PairPencils pair_linearize(const QtepPair& pair, const E1FreeParams& params1,
                           const E1FreeParams& params2, double tol) {
  return PairPencils{construct_e1_newton(pair.first(), params1, tol),
                     construct_e1_newton(pair.second(), params2, tol)};
}

DeltaTriple delta_operators(const NewtonPencil& l1, const NewtonPencil& l2) {
  const ComplexMatrix& a1 = l1.a1();
  const ComplexMatrix& b1 = l1.a2();
  const ComplexMatrix& c1 = l1.a3();
  const ComplexMatrix& a2 = l2.a1();
  const ComplexMatrix& b2 = l2.a2();
  const ComplexMatrix& c2 = l2.a3();

  DeltaTriple d;
  d.k1 = a1.rows();
  d.k2 = a2.rows();
  d.delta0 = kron(b1, c2) - kron(c1, b2);
  d.delta1 = kron(c1, a2) - kron(a1, c2);
  d.delta2 = kron(a1, b2) - kron(b1, a2);

  // D0 (u (x) u') = B1 u (x) C2 u' - C1 u (x) B2 u' vanishes when both B's,
  // or both C's, annihilate the factors.
  if (auto u = null_vector(b1)) {
    if (auto v = null_vector(b2)) d.kernel_witness = kron(*u, *v);
  }
  if (!d.kernel_witness) {
    if (auto u = null_vector(c1)) {
      if (auto v = null_vector(c2)) d.kernel_witness = kron(*u, *v);
    }
  }
  return d;
}

SingularityCertificate certify_singular(const DeltaTriple& delta, double tol) {
  const ComplexMatrix& d0 = delta.delta0;
  SingularityCertificate cert;
  cert.frobenius_norm = d0.norm();
  cert.threshold = tol * cert.frobenius_norm;
  const Eigen::VectorXd s = singular_values(d0);
  cert.sigma_min = s.size() ? s(s.size() - 1) : 0.0;
  cert.nullity_estimate = (s.array() <= cert.threshold).count();
  cert.is_singular = cert.sigma_min <= cert.threshold;

  if (d0.rows() % 3 == 0 && d0.rows() > 0) {
    const Index b = d0.rows() / 3;
    for (Index i = 0; i < 3; ++i) {
      for (Index j = 0; j < 3; ++j) {
        cert.zero_blocks[i][j] = d0.block(i * b, j * b, b, b).norm() <= cert.threshold;
      }
    }
    const auto& z = cert.zero_blocks;
    const bool upper = z[1][0] && z[2][0] && z[2][1];
    cert.block_triangular_zero_diagonal = upper && (z[0][0] || z[1][1] || z[2][2]);
  }

  if (delta.kernel_witness && cert.frobenius_norm > 0.0) {
    const ComplexVector& w = *delta.kernel_witness;
    cert.kernel_witness_residual = (d0 * w).norm() / (cert.frobenius_norm * w.norm());
  }
  return cert;
}

SliceSpectrum spectrum_slice(const MatrixPoly2& qn, Complex mu0, double tol) {
  const MatrixPoly2 q = qn.basis() == Basis::newton ? newton_to_monomial(qn) : qn;
  const Index n = q.size();
  const ComplexMatrix k2 = q.coeff(Coeff::a20);
  const ComplexMatrix k1 = q.coeff(Coeff::a10) + mu0 * q.coeff(Coeff::a11);
  const ComplexMatrix k0 =
      q.coeff(Coeff::a00) + mu0 * q.coeff(Coeff::a01) + (mu0 * mu0) * q.coeff(Coeff::a02);

  ComplexMatrix a = ComplexMatrix::Zero(2 * n, 2 * n);
  ComplexMatrix b = ComplexMatrix::Zero(2 * n, 2 * n);
  a.topRightCorner(n, n) = identity(n);
  a.bottomLeftCorner(n, n) = -k0;
  a.bottomRightCorner(n, n) = -k1;
  b.topLeftCorner(n, n) = identity(n);
  b.bottomRightCorner(n, n) = k2;

  const GeneralizedEigenResult eig = small_dense_eigen(a, b);
  SliceSpectrum out;
  out.mu = mu0;
  out.singular = eig.singular_pencil;
  const double n0 = k0.norm();
  const double n1 = k1.norm();
  const double n2 = k2.norm();

  std::vector<std::pair<Complex, double>> kept;
  for (const auto& pair : eig.pairs) {
    if (!pair.value) {
      ++out.infinite_count;
      continue;
    }
    const Complex lambda = *pair.value;
    // Eigenvectors have the form (x; lambda x).
    ComplexVector x = pair.vector.head(n);
    if (x.norm() < pair.vector.tail(n).norm() * 1e-3) x = pair.vector.tail(n) / lambda;
    const ComplexMatrix qv = (lambda * lambda) * k2 + lambda * k1 + k0;
    const double scale = (std::norm(lambda) * n2 + std::abs(lambda) * n1 + n0) * x.norm();
    const double residual = scale > 0.0 ? (qv * x).norm() / scale : 0.0;
    if (residual <= tol) {
      kept.emplace_back(lambda, residual);
    } else {
      ++out.rejected_count;
    }
  }
  std::sort(kept.begin(), kept.end(),
            [](const auto& l, const auto& r) { return complex_less(l.first, r.first); });
  for (const auto& [lambda, residual] : kept) {
    out.eigenvalues.push_back(lambda);
    out.residuals.push_back(residual);
  }
  return out;
}

SpectrumMatchReport verify_spectrum_match(const MatrixPoly2& qn, const NewtonPencil& ln, int slices,
                                          std::uint64_t seed, const SpectrumMatchOptions& options) {
  if (slices < 1) throw std::invalid_argument("verify_spectrum_match: slices must be positive");
  if (!qn.compatible_nodes(ln.nodes()) || qn.size() != ln.block_size()) {
    throw std::invalid_argument("verify_spectrum_match: pencil and polynomial do not match");
  }
  Rng rng(seed);
  SpectrumMatchReport report;
  report.all_contained = true;
  for (int s = 0; s < slices; ++s) {
    SliceMatch match;
    match.mu = rng.annulus();

    // Gamma2 is affine in lambda, so L_N(lambda, mu0) = lambda A1 + L_N(0, mu0).
    const ComplexMatrix constant = ln.eval(0.0, match.mu);
    for (int probe = 0; probe < 3; ++probe) {
      const Complex lambda = rng.annulus();
      if (hadamard_ratio(ln.eval(lambda, match.mu)) <= 1e-12) {
        match.pencil_singular = true;
      } else {
        match.pencil_singular = false;
        break;
      }
    }
    const GeneralizedEigenResult eig = small_dense_eigen(-constant, ln.a1());
    const std::vector<Complex> pencil_values = eig.finite_values();
    match.pencil_finite = static_cast<Index>(pencil_values.size());
    match.pencil_infinite = static_cast<Index>(eig.pairs.size()) - match.pencil_finite;

    const SliceSpectrum slice = spectrum_slice(qn, match.mu, options.residual_tol);
    match.polynomial_eigenvalues = slice.eigenvalues;
    match.contained = !match.pencil_singular;
    for (const Complex& lambda : slice.eigenvalues) {
      double best = HUGE_VAL;
      for (const Complex& p : pencil_values) best = std::min(best, std::abs(p - lambda));
      match.match_distance.push_back(best);
      if (!(best <= options.match_tol)) match.contained = false;
    }
    report.pencil_singular = report.pencil_singular || match.pencil_singular;
    report.all_contained = report.all_contained && match.contained;
    report.slices.push_back(std::move(match));
  }
  return report;
}

Complex BivariatePolynomial::eval(Complex lambda, Complex mu) const {
  Complex acc{};
  for (int a = degree; a >= 0; --a) {
    Complex inner{};
    for (int b = degree - a; b >= 0; --b) inner = inner * mu + coeffs(a, b);
    acc = acc * lambda + inner;
  }
  return acc;
}

Complex BivariatePolynomial::d_lambda(Complex lambda, Complex mu) const {
  Complex acc{};
  for (int a = degree; a >= 1; --a) {
    Complex inner{};
    for (int b = degree - a; b >= 0; --b) inner = inner * mu + coeffs(a, b);
    acc = acc * lambda + static_cast<double>(a) * inner;
  }
  return acc;
}

Complex BivariatePolynomial::d_mu(Complex lambda, Complex mu) const {
  Complex acc{};
  for (int a = degree; a >= 0; --a) {
    Complex inner{};
    for (int b = degree - a; b >= 1; --b) inner = inner * mu + static_cast<double>(b) * coeffs(a, b);
    acc = acc * lambda + inner;
  }
  return acc;
}

double BivariatePolynomial::magnitude(Complex lambda, Complex mu) const {
  const double l = std::abs(lambda);
  const double m = std::abs(mu);
  double acc = 0.0;
  for (int a = degree; a >= 0; --a) {
    double inner = 0.0;
    for (int b = degree - a; b >= 0; --b) inner = inner * m + std::abs(coeffs(a, b));
    acc = acc * l + inner;
  }
  return acc;
}

double BivariatePolynomial::relative_residual(Complex lambda, Complex mu) const {
  const double mag = magnitude(lambda, mu);
  return mag > 0.0 ? std::abs(eval(lambda, mu)) / mag : 0.0;
}

BivariatePolynomial interpolate_det(const MatrixPoly2& q) {
  const int d = 2 * static_cast<int>(q.size());
  const int m = d + 1;
  constexpr double kLambdaRadius = 1.0;
  constexpr double kMuRadius = 1.5;

  ComplexMatrix values(m, m);
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < m; ++k) {
      values(j, k) = det(eval_poly(q, kLambdaRadius * unit_root(j, m), kMuRadius * unit_root(k, m)));
    }
  }

  BivariatePolynomial p;
  p.degree = d;
  p.coeffs = ComplexMatrix::Zero(m, m);
  for (int a = 0; a <= d; ++a) {
    for (int b = 0; a + b <= d; ++b) {
      Complex acc{};
      for (int j = 0; j < m; ++j) {
        for (int k = 0; k < m; ++k) acc += values(j, k) * unit_root(-(a * j + b * k), m);
      }
      p.coeffs(a, b) = acc / static_cast<double>(m * m) /
                       (std::pow(kLambdaRadius, a) * std::pow(kMuRadius, b));
    }
  }
  return p;
}

SpectrumSample spectrum_pair_oracle(const QtepPair& pair, const PairOracleOptions& options) {
  const Index p1 = pair.first().size();
  const Index p2 = pair.second().size();
  if (p1 > 3 || p2 > 3) {
    throw std::invalid_argument("spectrum_pair_oracle: block sizes above 3 are not supported");
  }
  const BivariatePolynomial f = interpolate_det(pair.first());
  const BivariatePolynomial g = interpolate_det(pair.second());

  SpectrumSample sample;
  sample.bezout_bound = 4 * p1 * p2;

  // Resultant in lambda, sampled on the unit circle and interpolated in mu.
  const int df = lambda_degree(f);
  const int dg = lambda_degree(g);
  const int n_res = f.degree * g.degree + 1;
  std::vector<Complex> res_values(n_res);
  bool identically_zero = true;
  for (int k = 0; k < n_res; ++k) {
    const Complex mu = unit_root(k, n_res);
    const ComplexMatrix s = sylvester(lambda_coeffs(f, mu), df, lambda_coeffs(g, mu), dg);
    res_values[k] = det(s);
    if (s.rows() == 0 || hadamard_ratio(s) > 1e-10) identically_zero = false;
  }
  if (identically_zero || df + dg == 0) {
    sample.status = PairSpectrumStatus::shared_factor;
    return sample;
  }
  std::vector<Complex> res_coeffs(n_res);
  for (int j = 0; j < n_res; ++j) {
    Complex acc{};
    for (int k = 0; k < n_res; ++k) acc += res_values[k] * unit_root(-j * k, n_res);
    res_coeffs[j] = acc / static_cast<double>(n_res);
  }
  const std::vector<Complex> mu_roots = polynomial_roots(res_coeffs, 1e-12);
  sample.resultant_root_count = static_cast<Index>(mu_roots.size());

  const auto residual = [&](Complex lambda, Complex mu) {
    return std::max(f.relative_residual(lambda, mu), g.relative_residual(lambda, mu));
  };

  const auto polish = [&](Complex lambda, Complex mu) {
    for (int it = 0; it < options.max_newton_steps; ++it) {
      const Complex fv = f.eval(lambda, mu);
      const Complex gv = g.eval(lambda, mu);
      const Complex fl = f.d_lambda(lambda, mu);
      const Complex fm = f.d_mu(lambda, mu);
      const Complex gl = g.d_lambda(lambda, mu);
      const Complex gm = g.d_mu(lambda, mu);
      const Complex jac = fl * gm - fm * gl;
      if (jac == Complex{}) break;
      const Complex dl = -(gm * fv - fm * gv) / jac;
      const Complex dm = -(fl * gv - gl * fv) / jac;
      lambda += dl;
      mu += dm;
      const double step = std::sqrt(std::norm(dl) + std::norm(dm));
      if (step < options.step_tol * (1.0 + std::abs(lambda) + std::abs(mu))) break;
    }
    return std::pair{lambda, mu};
  };

  std::vector<SpectrumPoint> found;
  for (const Complex& mu : mu_roots) {
    std::vector<Complex> candidates = polynomial_roots(lambda_coeffs(f, mu), 1e-12);
    const std::vector<Complex> from_g = polynomial_roots(lambda_coeffs(g, mu), 1e-12);
    candidates.insert(candidates.end(), from_g.begin(), from_g.end());
    for (const Complex& lambda : candidates) {
      if (residual(lambda, mu) > 1e-3) continue;
      const auto [pl, pm] = polish(lambda, mu);
      const double r = residual(pl, pm);
      if (!(r <= options.residual_tol)) continue;
      const bool duplicate = std::any_of(found.begin(), found.end(), [&](const SpectrumPoint& p) {
        const double dist = std::sqrt(std::norm(p.lambda - pl) + std::norm(p.mu - pm));
        return dist <= 1e-6 * (1.0 + std::abs(pl) + std::abs(pm));
      });
      if (!duplicate) found.push_back({pl, pm, r});
    }
  }
  std::sort(found.begin(), found.end(), [](const SpectrumPoint& a, const SpectrumPoint& b) {
    if (a.lambda != b.lambda) return complex_less(a.lambda, b.lambda);
    return complex_less(a.mu, b.mu);
  });
  sample.points = std::move(found);
  return sample;
}

}  // namespace newton2pep
