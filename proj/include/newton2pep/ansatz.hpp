#pragma once

#include "newton2pep/matpoly.hpp"

#include <array>
#include <cstdint>
#include <utility>

namespace newton2pep {

inline constexpr double kDefaultTol = 1e-9;

/// L(lambda, mu) = lambda L1 + mu L2 + L0 with 3n x 3n blocks.
class MonomialPencil {
 public:
  MonomialPencil(ComplexMatrix l1, ComplexMatrix l2, ComplexMatrix l0);

  Index block_size() const { return l1_.rows() / 3; }
  const ComplexMatrix& l1() const { return l1_; }
  const ComplexMatrix& l2() const { return l2_; }
  const ComplexMatrix& l0() const { return l0_; }

  ComplexMatrix eval(Complex lambda, Complex mu) const;
  /// Pencil with every block multiplied on the right by `r` (3n x 3n).
  MonomialPencil right_multiplied(const ComplexMatrix& r) const;
  MonomialPencil left_multiplied(const ComplexMatrix& l) const;

  friend MonomialPencil operator+(const MonomialPencil& a, const MonomialPencil& b);
  friend MonomialPencil operator*(Complex c, const MonomialPencil& a);

 private:
  ComplexMatrix l1_, l2_, l0_;
};

/// L_N(lambda, mu) = A1 Gamma2(lambda) + A2 Gamma2~(mu) + A3.
class NewtonPencil {
 public:
  NewtonPencil(ComplexMatrix a1, ComplexMatrix a2, ComplexMatrix a3, const NewtonNodes& nodes);

  Index block_size() const { return a1_.rows() / 3; }
  const NewtonNodes& nodes() const { return nodes_; }
  const ComplexMatrix& a1() const { return a1_; }
  const ComplexMatrix& a2() const { return a2_; }
  const ComplexMatrix& a3() const { return a3_; }

  ComplexMatrix eval(Complex lambda, Complex mu) const;
  /// (L (x) I_n) applied as a constant block-row transformation.
  NewtonPencil left_multiplied(const ComplexMatrix& l) const;

  /// Throws std::invalid_argument when the nodes differ.
  friend NewtonPencil operator+(const NewtonPencil& a, const NewtonPencil& b);
  friend NewtonPencil operator*(Complex c, const NewtonPencil& a);

 private:
  ComplexMatrix a1_, a2_, a3_;
  NewtonNodes nodes_;
};

/// Right ansatz vector with its zero pattern. A component is classified as
/// zero when its modulus is at most the tolerance; the same tolerance is used
/// for membership residuals.
struct AnsatzVector {
  Eigen::Vector3cd values = Eigen::Vector3cd::Zero();
  std::array<bool, 3> nonzero{false, false, false};

  static AnsatzVector classify(const Eigen::Vector3cd& v, double tol = kDefaultTol);
  bool is_zero() const { return !nonzero[0] && !nonzero[1] && !nonzero[2]; }
};

/// Diagonal blocks Gamma2(lambda) = diag(lambda-a2, lambda-a1, lambda-a1) (x) I_n
/// and Gamma2~(mu) = diag(mu-b1, mu-b2, mu-b1) (x) I_n.
std::pair<ComplexMatrix, ComplexMatrix> gamma_blocks(const NewtonNodes& nodes, Index n,
                                                     Complex lambda, Complex mu);

enum class MembershipStatus { member, not_member, ill_posed };

struct MembershipOptions {
  int samples = 12;
  double tol = kDefaultTol;
  std::uint64_t seed = 0;
};

struct MembershipResult {
  MembershipStatus status = MembershipStatus::ill_posed;
  /// Least-squares ansatz estimate; meaningful only for members.
  AnsatzVector ansatz;
  /// Worst relative residual over the sample points.
  double residual = 0.0;
  int sample_count = 0;

  bool is_member() const { return status == MembershipStatus::member; }
};

/// Tests L(lambda, mu)(Lambda (x) I_n) = v (x) Q(lambda, mu). Q must be
/// monomial-tagged with matching block size.
MembershipResult membership_monomial(const MonomialPencil& pencil, const MatrixPoly2& q,
                                     const MembershipOptions& options = {});

/// Tests L_N(lambda, mu)(N (x) I_n) = v (x) Q_N(lambda, mu). The nodes of the
/// pencil and polynomial must agree (a monomial polynomial counts as zero
/// nodes).
MembershipResult membership_newton(const NewtonPencil& pencil, const MatrixPoly2& qn,
                                   const MembershipOptions& options = {});

/// Change of basis with S Lambda = N.
struct SMap {
  Eigen::Matrix3cd s;
  Eigen::Matrix3cd s_inv;
};

SMap s_map(const NewtonNodes& nodes);

/// L -> L (S^-1 (x) I_n), block by block.
MonomialPencil isomorphism_f(const MonomialPencil& pencil, const NewtonNodes& nodes);
/// T -> T (S (x) I_n); inverse of isomorphism_f.
MonomialPencil isomorphism_g(const MonomialPencil& pencil, const NewtonNodes& nodes);

/// Reuses the blocks of lambda A1 + mu A2 + A3 as A1 Gamma2 + A2 Gamma2~ + A3
/// over the nodes of `qn`. The ansatz precondition is not checked here; run
/// membership_newton on the result when it matters.
NewtonPencil transfer_to_newton(const MonomialPencil& pencil, const MatrixPoly2& qn);

/// The table lists the pattern (a != 0, b = 0, c != 0) twice; `first` is the
/// default and `second` selects the later row.
enum class AppendixRow { first, second };

/// Nonsingular M with M v = e1 chosen from v's zero pattern. Throws
/// std::invalid_argument for the zero vector.
Eigen::Matrix3cd select_M(const AnsatzVector& v, AppendixRow row = AppendixRow::first);

}  // namespace newton2pep
