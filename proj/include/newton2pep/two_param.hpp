#pragma once

#include "newton2pep/linearize.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace newton2pep {

/// Two Newton-basis quadratics on shared nodes, of sizes p1 and p2.
/// Coefficient roles: F <-> n2, E <-> n1 m1, D <-> m2, C <-> n1, B <-> m1, A <-> 1.
class QtepPair {
 public:
  /// Throws std::invalid_argument when the nodes differ. Monomial inputs count
  /// as zero nodes.
  QtepPair(MatrixPoly2 q1, MatrixPoly2 q2);

  const MatrixPoly2& first() const { return q1_; }
  const MatrixPoly2& second() const { return q2_; }
  const NewtonNodes& nodes() const { return q1_.nodes(); }

 private:
  MatrixPoly2 q1_;
  MatrixPoly2 q2_;
};

struct PairPencils {
  NewtonPencil first;
  NewtonPencil second;
};

/// e1 linearization of each member of the pair.
PairPencils pair_linearize(const QtepPair& pair, const E1FreeParams& params1,
                           const E1FreeParams& params2, double tol = kDefaultTol);

/// Operator determinants of a pencil pair. With A = Gamma2 coefficient,
/// B = Gamma2~ coefficient, C = constant term:
///   D0 = B1 (x) C2 - C1 (x) B2,
///   D1 = C1 (x) A2 - A1 (x) C2,
///   D2 = A1 (x) B2 - B1 (x) A2.
struct DeltaTriple {
  ComplexMatrix delta0, delta1, delta2;
  Index k1 = 0;
  Index k2 = 0;
  /// u (x) u' with B1 u = 0 and B2 u' = 0 (or the same for C) when both
  /// factors are singular; then D0 (u (x) u') = 0 by construction.
  std::optional<ComplexVector> kernel_witness;
};

DeltaTriple delta_operators(const NewtonPencil& l1, const NewtonPencil& l2);

struct SingularityCertificate {
  bool is_singular = false;
  double sigma_min = 0.0;
  double frobenius_norm = 0.0;
  double threshold = 0.0;
  /// Singular values of D0 at or below the threshold.
  Index nullity_estimate = 0;
  /// Zero pattern of D0 viewed as 3x3 blocks of order k1 k2 / 3, and whether
  /// that pattern is block upper triangular with a zero diagonal block.
  std::array<std::array<bool, 3>, 3> zero_blocks{};
  bool block_triangular_zero_diagonal = false;
  /// ||D0 z|| / (||D0||_F ||z||) for the Kronecker kernel witness.
  std::optional<double> kernel_witness_residual;
};

/// Singular iff sigma_min(D0) <= tol ||D0||_F.
SingularityCertificate certify_singular(const DeltaTriple& delta, double tol = 1e-7);

struct SliceSpectrum {
  Complex mu{};
  std::vector<Complex> eigenvalues;  // sorted by real, then imaginary part
  std::vector<double> residuals;
  Index infinite_count = 0;
  Index rejected_count = 0;  // finite but above the residual tolerance
  bool singular = false;
};

/// Finite eigenvalues lambda of Q_N(lambda, mu0) through the 2n x 2n
/// companion pencil of the monomial slice, kept when the backward error
/// ||Q x|| / ((|l|^2 ||K2|| + |l| ||K1|| + ||K0||) ||x||) is at most `tol`.
SliceSpectrum spectrum_slice(const MatrixPoly2& qn, Complex mu0, double tol = 1e-8);

struct SpectrumMatchOptions {
  double match_tol = 1e-6;
  double residual_tol = 1e-8;
};

struct SliceMatch {
  Complex mu{};
  std::vector<Complex> polynomial_eigenvalues;
  std::vector<double> match_distance;
  Index pencil_finite = 0;
  Index pencil_infinite = 0;
  bool pencil_singular = false;
  bool contained = false;
};

struct SpectrumMatchReport {
  std::vector<SliceMatch> slices;
  bool all_contained = false;
  bool pencil_singular = false;
};

/// At `slices` random mu0, every finite eigenvalue of Q_N(., mu0) must lie
/// within match_tol of an eigenvalue of the linear-in-lambda pencil
/// L_N(., mu0).
SpectrumMatchReport verify_spectrum_match(const MatrixPoly2& qn, const NewtonPencil& ln, int slices,
                                          std::uint64_t seed,
                                          const SpectrumMatchOptions& options = {});

/// Bivariate scalar polynomial sum c(a, b) lambda^a mu^b with a + b <= degree.
struct BivariatePolynomial {
  int degree = 0;
  ComplexMatrix coeffs;  // (degree+1) x (degree+1)

  Complex eval(Complex lambda, Complex mu) const;
  Complex d_lambda(Complex lambda, Complex mu) const;
  Complex d_mu(Complex lambda, Complex mu) const;
  /// sum |c(a, b)| |lambda|^a |mu|^b.
  double magnitude(Complex lambda, Complex mu) const;
  /// |p| / magnitude, 0 when the magnitude vanishes.
  double relative_residual(Complex lambda, Complex mu) const;
};

/// det Q recovered by 2-D DFT interpolation on a tensor grid of
/// (2n+1)^2 points: roots of unity of radius 1 in lambda and 1.5 in mu.
BivariatePolynomial interpolate_det(const MatrixPoly2& q);

struct SpectrumPoint {
  Complex lambda{};
  Complex mu{};
  double residual = 0.0;
};

enum class PairSpectrumStatus { ok, shared_factor };

struct SpectrumSample {
  PairSpectrumStatus status = PairSpectrumStatus::ok;
  std::vector<SpectrumPoint> points;  // sorted by lambda, then mu
  /// Resultant roots counted with multiplicity.
  Index resultant_root_count = 0;
  Index bezout_bound = 0;  // 4 p1 p2
};

struct PairOracleOptions {
  double residual_tol = 1e-8;
  int max_newton_steps = 50;
  double step_tol = 1e-12;
};

/// Common zeros of det Q_N1 and det Q_N2 by elimination of lambda through the
/// Sylvester resultant, followed by Newton polishing on the pair. Sizes up to 3.
SpectrumSample spectrum_pair_oracle(const QtepPair& pair, const PairOracleOptions& options = {});

}  // namespace newton2pep
