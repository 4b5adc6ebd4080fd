#include "newton2pep/ansatz.hpp"

#include "newton2pep/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

namespace newton2pep {

namespace {

void require_pencil_blocks(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c,
                           const char* what) {
  const Index k = a.rows();
  if (k == 0 || k % 3 != 0) {
    throw std::invalid_argument(std::string(what) + ": block order must be a positive multiple of 3");
  }
  for (const ComplexMatrix* m : {&a, &b, &c}) {
    if (m->rows() != k || m->cols() != k) {
      throw std::invalid_argument(std::string(what) + ": all three blocks must be " +
                                  std::to_string(k) + "x" + std::to_string(k));
    }
  }
}

// Diagonals of Gamma2 and Gamma2~ as length-3n vectors.
std::pair<ComplexVector, ComplexVector> gamma_diagonals(const NewtonNodes& nodes, Index n,
                                                        Complex lambda, Complex mu) {
  ComplexVector g(3 * n);
  ComplexVector gt(3 * n);
  g.segment(0, n).setConstant(lambda - nodes.alpha2);
  g.segment(n, n).setConstant(lambda - nodes.alpha1);
  g.segment(2 * n, n).setConstant(lambda - nodes.alpha1);
  gt.segment(0, n).setConstant(mu - nodes.beta1);
  gt.segment(n, n).setConstant(mu - nodes.beta2);
  gt.segment(2 * n, n).setConstant(mu - nodes.beta1);
  return {g, gt};
}

ComplexMatrix identity(Index n) { return ComplexMatrix::Identity(n, n); }

// Shared least-squares ansatz recovery. `evaluate(lambda, mu)` returns the
// pencil value L, the 3-vector b it is paired with, and Q.
template <typename Evaluate>
MembershipResult recover_ansatz(Index n, const MembershipOptions& options, Evaluate&& evaluate) {
  if (options.samples < 1) throw std::invalid_argument("membership: need at least one sample");
  const auto points = sample_points(options.samples, options.seed);

  struct Sample {
    ComplexMatrix stacked;  // L (b (x) I_n), 3n x n
    ComplexMatrix q;
    double scale;  // ||L||_F ||b||
  };
  std::vector<Sample> samples;
  samples.reserve(points.size());
  double q_max = 0.0;
  for (const auto& [lambda, mu] : points) {
    auto [l, b, q] = evaluate(lambda, mu);
    Sample s;
    s.stacked = l * kron(b, identity(n));
    s.scale = l.norm() * b.norm();
    s.q = std::move(q);
    q_max = std::max(q_max, s.q.norm());
    samples.push_back(std::move(s));
  }

  MembershipResult result;
  result.sample_count = static_cast<int>(samples.size());
  if (q_max == 0.0) {
    result.status = MembershipStatus::ill_posed;
    return result;
  }

  // Each block row decouples: minimize sum_k ||R_k[i] - v_i Q_k||_F^2.
  Eigen::Vector3cd v = Eigen::Vector3cd::Zero();
  double q_energy = 0.0;
  for (const auto& s : samples) q_energy += s.q.squaredNorm();
  for (int i = 0; i < 3; ++i) {
    Complex num{};
    for (const auto& s : samples) {
      num += (s.q.array().conjugate() * s.stacked.block(i * n, 0, n, n).array()).sum();
    }
    v(i) = num / q_energy;
  }

  double worst = 0.0;
  for (const auto& s : samples) {
    const ComplexMatrix defect = s.stacked - kron(v, s.q);
    const double denom = s.scale + v.norm() * s.q.norm();
    if (denom > 0.0) worst = std::max(worst, defect.norm() / denom);
  }
  result.residual = worst;
  result.ansatz = AnsatzVector::classify(v, options.tol);
  result.status = worst <= options.tol ? MembershipStatus::member : MembershipStatus::not_member;
  return result;
}

}  // namespace

MonomialPencil::MonomialPencil(ComplexMatrix l1, ComplexMatrix l2, ComplexMatrix l0)
    : l1_(std::move(l1)), l2_(std::move(l2)), l0_(std::move(l0)) {
  require_pencil_blocks(l1_, l2_, l0_, "MonomialPencil");
}

ComplexMatrix MonomialPencil::eval(Complex lambda, Complex mu) const {
  return lambda * l1_ + mu * l2_ + l0_;
}

MonomialPencil MonomialPencil::right_multiplied(const ComplexMatrix& r) const {
  return {l1_ * r, l2_ * r, l0_ * r};
}

MonomialPencil MonomialPencil::left_multiplied(const ComplexMatrix& l) const {
  return {l * l1_, l * l2_, l * l0_};
}

MonomialPencil operator+(const MonomialPencil& a, const MonomialPencil& b) {
  return {a.l1_ + b.l1_, a.l2_ + b.l2_, a.l0_ + b.l0_};
}

MonomialPencil operator*(Complex c, const MonomialPencil& a) {
  return {c * a.l1_, c * a.l2_, c * a.l0_};
}

NewtonPencil::NewtonPencil(ComplexMatrix a1, ComplexMatrix a2, ComplexMatrix a3,
                           const NewtonNodes& nodes)
    : a1_(std::move(a1)), a2_(std::move(a2)), a3_(std::move(a3)), nodes_(nodes) {
  require_pencil_blocks(a1_, a2_, a3_, "NewtonPencil");
}

ComplexMatrix NewtonPencil::eval(Complex lambda, Complex mu) const {
  const auto [g, gt] = gamma_diagonals(nodes_, block_size(), lambda, mu);
  return a1_ * g.asDiagonal() + a2_ * gt.asDiagonal() + a3_;
}

NewtonPencil NewtonPencil::left_multiplied(const ComplexMatrix& l) const {
  return {l * a1_, l * a2_, l * a3_, nodes_};
}

NewtonPencil operator+(const NewtonPencil& a, const NewtonPencil& b) {
  if (!(a.nodes_ == b.nodes_)) throw std::invalid_argument("NewtonPencil sum: node mismatch");
  return {a.a1_ + b.a1_, a.a2_ + b.a2_, a.a3_ + b.a3_, a.nodes_};
}

NewtonPencil operator*(Complex c, const NewtonPencil& a) {
  return {c * a.a1_, c * a.a2_, c * a.a3_, a.nodes_};
}

AnsatzVector AnsatzVector::classify(const Eigen::Vector3cd& v, double tol) {
  AnsatzVector out;
  out.values = v;
  for (int i = 0; i < 3; ++i) out.nonzero[i] = std::abs(v(i)) > tol;
  return out;
}

std::pair<ComplexMatrix, ComplexMatrix> gamma_blocks(const NewtonNodes& nodes, Index n,
                                                     Complex lambda, Complex mu) {
  if (n < 1) throw std::invalid_argument("gamma_blocks: n must be at least 1");
  const auto [g, gt] = gamma_diagonals(nodes, n, lambda, mu);
  return {ComplexMatrix(g.asDiagonal()), ComplexMatrix(gt.asDiagonal())};
}

MembershipResult membership_monomial(const MonomialPencil& pencil, const MatrixPoly2& q,
                                     const MembershipOptions& options) {
  if (q.basis() != Basis::monomial) {
    throw std::invalid_argument("membership_monomial: polynomial must be monomial-tagged");
  }
  if (q.size() != pencil.block_size()) {
    throw std::invalid_argument("membership_monomial: block sizes differ");
  }
  return recover_ansatz(q.size(), options, [&](Complex lambda, Complex mu) {
    ComplexMatrix b = lambda3(lambda, mu);
    return std::tuple{pencil.eval(lambda, mu), b, eval_poly(q, lambda, mu)};
  });
}

MembershipResult membership_newton(const NewtonPencil& pencil, const MatrixPoly2& qn,
                                   const MembershipOptions& options) {
  if (!qn.compatible_nodes(pencil.nodes())) {
    throw std::invalid_argument("membership_newton: pencil and polynomial nodes differ");
  }
  if (qn.size() != pencil.block_size()) {
    throw std::invalid_argument("membership_newton: block sizes differ");
  }
  return recover_ansatz(qn.size(), options, [&](Complex lambda, Complex mu) {
    ComplexMatrix b = newton3(pencil.nodes(), lambda, mu);
    return std::tuple{pencil.eval(lambda, mu), b, eval_poly(qn, lambda, mu)};
  });
}

SMap s_map(const NewtonNodes& nodes) {
  SMap m;
  m.s << 1.0, 0.0, -nodes.alpha1, 0.0, 1.0, -nodes.beta1, 0.0, 0.0, 1.0;
  m.s_inv << 1.0, 0.0, nodes.alpha1, 0.0, 1.0, nodes.beta1, 0.0, 0.0, 1.0;
  return m;
}

MonomialPencil isomorphism_f(const MonomialPencil& pencil, const NewtonNodes& nodes) {
  const ComplexMatrix s_inv = s_map(nodes).s_inv;
  return pencil.right_multiplied(kron(s_inv, identity(pencil.block_size())));
}

MonomialPencil isomorphism_g(const MonomialPencil& pencil, const NewtonNodes& nodes) {
  const ComplexMatrix s = s_map(nodes).s;
  return pencil.right_multiplied(kron(s, identity(pencil.block_size())));
}

NewtonPencil transfer_to_newton(const MonomialPencil& pencil, const MatrixPoly2& qn) {
  if (qn.size() != pencil.block_size()) {
    throw std::invalid_argument("transfer_to_newton: block sizes differ");
  }
  return {pencil.l1(), pencil.l2(), pencil.l0(), qn.nodes()};
}

Eigen::Matrix3cd select_M(const AnsatzVector& v, AppendixRow row) {
  if (v.is_zero()) {
    throw std::invalid_argument("select_M: ansatz vector is zero; no pencil with v = 0 is a linearization");
  }
  const Complex a = v.values(0);
  const Complex b = v.values(1);
  const Complex c = v.values(2);
  const auto [has_a, has_b, has_c] = v.nonzero;
  const Complex one{1.0, 0.0};
  Eigen::Matrix3cd m;
  if (has_a && has_b && has_c) {
    m << one / a, 0.0, 0.0,
         one / a, -one / b, 0.0,
         one / a, 0.0, -one / c;
  } else if (!has_a && has_b && has_c) {
    m << 0.0, one / b, 0.0,
         0.0, -one / b, one / c,
         1.0, 0.0, 0.0;
  } else if (!has_a && !has_b && has_c) {
    m << 1.0, 1.0, one / c,
         1.0, 1.0, 0.0,
         0.0, 1.0, 0.0;
  } else if (has_a && !has_b && has_c) {
    if (row == AppendixRow::first) {
      m << one / a, 0.0, 0.0,
           0.0, 1.0, 0.0,
           -one / a, 0.0, one / c;
    } else {
      m << one / a, 0.0, 0.0,
           one / a, 0.0, -one / c,
           0.0, 1.0, 0.0;
    }
  } else if (has_a && !has_b && !has_c) {
    m << one / a, 0.0, 0.0,
         0.0, 1.0, 0.0,
         0.0, 1.0, 1.0;
  } else if (has_a && has_b && !has_c) {
    m << one / a, 0.0, 1.0,
         one / a, -one / b, 1.0,
         -one / a, one / b, 0.0;
  } else {  // a = 0, b != 0, c = 0
    m << 1.0, one / b, 0.0,
         1.0, 0.0, 0.0,
         1.0, 0.0, 1.0;
  }
  return m;
}

}  // namespace newton2pep
