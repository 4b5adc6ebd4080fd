#pragma once

#include "newton2pep/ansatz.hpp"
#include "newton2pep/sampling.hpp"

#include <cstdint>
#include <optional>

namespace newton2pep {

/// Free blocks of an e1-ansatz pencil: Y1 = (Y11; 0; 0), Z1 = (Z11; Z21; Z31)
/// and Z2 = (Z12; Z22; Z32).
struct E1FreeParams {
  ComplexMatrix y11;  // n x n
  ComplexMatrix z1;   // 3n x n
  ComplexMatrix z2;   // 3n x n

  Index block_size() const { return y11.rows(); }
  /// [[Z21, Z22], [Z31, Z32]], the 2n x 2n block that must be nonsingular.
  ComplexMatrix z_block() const;
  /// Throws std::invalid_argument on inconsistent shapes or non-finite entries.
  void validate_shapes() const;
};

/// sigma_min(Z) > tol * sigma_max(Z).
bool params_admissible(const E1FreeParams& params, double tol = kDefaultTol);

/// Parameters reproducing the companion pencil: Y11 = 0,
/// Z1 = (A10; 0; -I), Z2 = (A01; -I; 0).
E1FreeParams companion_params(const MatrixPoly2& q);

/// Dense complex-normal blocks; admissible with probability one.
E1FreeParams random_params(Index n, Rng& rng);

/// Standard companion pencil of a monomial polynomial.
MonomialPencil companion_pencil(const MatrixPoly2& q);

struct PencilBlocks {
  ComplexMatrix a1, a2, a3;
};

/// e1-form blocks from the six coefficients and free parameters, without the
/// admissibility check. Used for negative tests of the determinant condition.
PencilBlocks assemble_e1_blocks(const CoeffArray& coeffs, const E1FreeParams& params);

/// Throws std::invalid_argument when q is not monomial or the Z block fails
/// params_admissible(params, tol).
MonomialPencil construct_e1_monomial(const MatrixPoly2& q, const E1FreeParams& params,
                                     double tol = kDefaultTol);

/// Newton-basis e1 pencil A1 Gamma2 + A2 Gamma2~ + A3 over qn's nodes.
NewtonPencil construct_e1_newton(const MatrixPoly2& qn, const E1FreeParams& params,
                                 double tol = kDefaultTol);

/// Left and right unimodular factors F~ and E~ with
/// F~ L_N E~ = diag(Q_N, I_2n) for an e1 pencil.
class UnimodularWitnessPair {
 public:
  UnimodularWitnessPair(const MatrixPoly2& qn, E1FreeParams params, ComplexMatrix z_inverse);

  Index block_size() const { return params_.block_size(); }
  ComplexMatrix e(Complex lambda, Complex mu) const;
  ComplexMatrix f(Complex lambda, Complex mu) const;
  /// [W1 W2], the n x 2n first block row of L_N E~ beside Q_N.
  ComplexMatrix w(Complex lambda, Complex mu) const;
  const ComplexMatrix& z_inverse() const { return z_inverse_; }
  /// det L_N / det Q_N implied by the factors, 1 / (det F~ det E~) = det Z.
  Complex predicted_gamma() const;

 private:
  NewtonNodes nodes_;
  ComplexMatrix a20_, a11_, a02_;
  E1FreeParams params_;
  ComplexMatrix z_inverse_;
};

/// Throws std::invalid_argument when sizes or nodes disagree or Z is
/// numerically singular.
UnimodularWitnessPair unimodular_witnesses(const MatrixPoly2& qn, const NewtonPencil& ln,
                                           const E1FreeParams& params, double tol = kDefaultTol);

struct WitnessCheck {
  double max_reduction_residual = 0.0;  // ||F L E - diag(Q, I)||_F / ||diag(Q, I)||_F
  double det_e_variation = 0.0;         // max |det E_k - det E_0| / |det E_0|
  double det_f_variation = 0.0;
  Complex det_e{};
  Complex det_f{};
  int sample_count = 0;

  bool passed(double tol) const {
    return max_reduction_residual <= tol && det_e_variation <= tol && det_f_variation <= tol &&
           std::abs(det_e) > 0.0 && std::abs(det_f) > 0.0;
  }
};

WitnessCheck check_witnesses(const UnimodularWitnessPair& witnesses, const NewtonPencil& ln,
                             const MatrixPoly2& qn, int samples = 12, std::uint64_t seed = 0);

enum class Verdict { pass, fail, inconclusive };

struct VerifyOptions {
  int samples = 12;
  double tol = kDefaultTol;
  std::uint64_t seed = 0;
};

struct LinearizationReport {
  Complex gamma_estimate{};
  double max_relative_deviation = 0.0;
  int sample_count = 0;
  Verdict verdict = Verdict::inconclusive;
  SamplePoint reference{};
};

/// Estimates gamma = det L_N / det Q_N at the sample where |det Q_N| is
/// largest and checks |det L_N - gamma det Q_N| <= tol |gamma det Q_N| at
/// the rest. Inconclusive when Q_N is numerically singular at every sample.
LinearizationReport verify_linearization(const NewtonPencil& ln, const MatrixPoly2& qn,
                                         const VerifyOptions& options = {});

struct GeneralAnsatzOptions {
  double tol = kDefaultTol;
  std::uint64_t seed = 0;
  AppendixRow row = AppendixRow::first;
  int max_retries = 32;
};

struct GeneralAnsatzResult {
  Eigen::Matrix3cd m;
  /// Parameters before the block-row transformation, with the Y11 rule
  /// applied.
  E1FreeParams params;
  /// e1-form parameters of (M (x) I_n) L_N.
  E1FreeParams hat_params;
  NewtonPencil hat_pencil;  // ansatz e1
  NewtonPencil pencil;      // ansatz v
  bool y11_free = false;
  bool default_z = false;
  int random_draws = 0;
};

/// Linearization with a prescribed nonzero ansatz vector: pick M with
/// M v = e1, build the e1 pencil from the transformed parameters and undo M.
/// Without `params`, Z is chosen so that the transformed Z block is the
/// identity, falling back to seeded random draws when M's trailing 2x2 block
/// is singular.
GeneralAnsatzResult construct_general_ansatz(const MatrixPoly2& qn, const AnsatzVector& v,
                                             const std::optional<E1FreeParams>& params = std::nullopt,
                                             const GeneralAnsatzOptions& options = {});

}  // namespace newton2pep
