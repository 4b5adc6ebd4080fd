#include "newton2pep/linearize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace newton2pep {

namespace {

ComplexMatrix identity(Index n) { return ComplexMatrix::Identity(n, n); }

// (X; 0; 0), 3n x n.
ComplexMatrix e1_kron(const ComplexMatrix& x) {
  const Index n = x.rows();
  ComplexMatrix out = ComplexMatrix::Zero(3 * n, n);
  out.topRows(n) = x;
  return out;
}

ComplexMatrix hstack3(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c) {
  ComplexMatrix out(a.rows(), a.cols() + b.cols() + c.cols());
  out << a, b, c;
  return out;
}

void require_admissible(const E1FreeParams& params, double tol, const char* what) {
  if (!params_admissible(params, tol)) {
    const ComplexMatrix z = params.z_block();
    throw std::invalid_argument(std::string(what) +
                                ": Z-block determinant condition violated (sigma_min=" +
                                std::to_string(smallest_singular_value(z)) + ")");
  }
}

}  // namespace

ComplexMatrix E1FreeParams::z_block() const {
  const Index n = block_size();
  ComplexMatrix z(2 * n, 2 * n);
  z << z1.middleRows(n, n), z2.middleRows(n, n), z1.bottomRows(n), z2.bottomRows(n);
  return z;
}

void E1FreeParams::validate_shapes() const {
  const Index n = y11.rows();
  if (n < 1 || y11.cols() != n) throw std::invalid_argument("E1FreeParams: Y11 must be n x n");
  if (z1.rows() != 3 * n || z1.cols() != n || z2.rows() != 3 * n || z2.cols() != n) {
    throw std::invalid_argument("E1FreeParams: Z1 and Z2 must be 3n x n");
  }
  if (!all_finite(y11) || !all_finite(z1) || !all_finite(z2)) {
    throw std::invalid_argument("E1FreeParams: non-finite entries");
  }
}

bool params_admissible(const E1FreeParams& params, double tol) {
  params.validate_shapes();
  const Eigen::VectorXd s = singular_values(params.z_block());
  return s(0) > 0.0 && s(s.size() - 1) > tol * s(0);
}

E1FreeParams companion_params(const MatrixPoly2& q) {
  const Index n = q.size();
  E1FreeParams p;
  p.y11 = ComplexMatrix::Zero(n, n);
  p.z1 = ComplexMatrix::Zero(3 * n, n);
  p.z2 = ComplexMatrix::Zero(3 * n, n);
  p.z1.topRows(n) = q.coeff(Coeff::a10);
  p.z1.bottomRows(n) = -identity(n);
  p.z2.topRows(n) = q.coeff(Coeff::a01);
  p.z2.middleRows(n, n) = -identity(n);
  return p;
}

E1FreeParams random_params(Index n, Rng& rng) {
  E1FreeParams p;
  p.y11 = rng.matrix(n, n);
  p.z1 = rng.matrix(3 * n, n);
  p.z2 = rng.matrix(3 * n, n);
  return p;
}

MonomialPencil companion_pencil(const MatrixPoly2& q) {
  if (q.basis() != Basis::monomial) {
    throw std::invalid_argument("companion_pencil: polynomial must be monomial-tagged");
  }
  const Index n = q.size();
  const ComplexMatrix id = identity(n);
  ComplexMatrix l1 = ComplexMatrix::Zero(3 * n, 3 * n);
  ComplexMatrix l2 = ComplexMatrix::Zero(3 * n, 3 * n);
  ComplexMatrix l0 = ComplexMatrix::Zero(3 * n, 3 * n);
  l1.block(0, 0, n, n) = q.coeff(Coeff::a20);
  l1.block(0, n, n, n) = q.coeff(Coeff::a11);
  l1.block(2 * n, 2 * n, n, n) = id;
  l2.block(0, n, n, n) = q.coeff(Coeff::a02);
  l2.block(n, 2 * n, n, n) = id;
  l0.block(0, 0, n, n) = q.coeff(Coeff::a10);
  l0.block(0, n, n, n) = q.coeff(Coeff::a01);
  l0.block(0, 2 * n, n, n) = q.coeff(Coeff::a00);
  l0.block(n, n, n, n) = -id;
  l0.block(2 * n, 0, n, n) = -id;
  return {std::move(l1), std::move(l2), std::move(l0)};
}

PencilBlocks assemble_e1_blocks(const CoeffArray& coeffs, const E1FreeParams& params) {
  params.validate_shapes();
  const Index n = params.block_size();
  if (coeffs[0].rows() != n) throw std::invalid_argument("assemble_e1_blocks: block sizes differ");
  const auto c = [&](Coeff k) -> const ComplexMatrix& { return coeffs[static_cast<int>(k)]; };
  const ComplexMatrix y1 = e1_kron(params.y11);

  PencilBlocks b;
  b.a1 = hstack3(e1_kron(c(Coeff::a20)), -y1 + e1_kron(c(Coeff::a11)),
                 -params.z1 + e1_kron(c(Coeff::a10)));
  b.a2 = hstack3(y1, e1_kron(c(Coeff::a02)), -params.z2 + e1_kron(c(Coeff::a01)));
  b.a3 = hstack3(params.z1, params.z2, e1_kron(c(Coeff::a00)));
  return b;
}

MonomialPencil construct_e1_monomial(const MatrixPoly2& q, const E1FreeParams& params, double tol) {
  if (q.basis() != Basis::monomial) {
    throw std::invalid_argument("construct_e1_monomial: polynomial must be monomial-tagged");
  }
  require_admissible(params, tol, "construct_e1_monomial");
  auto b = assemble_e1_blocks(q.coeffs(), params);
  return {std::move(b.a1), std::move(b.a2), std::move(b.a3)};
}

NewtonPencil construct_e1_newton(const MatrixPoly2& qn, const E1FreeParams& params, double tol) {
  require_admissible(params, tol, "construct_e1_newton");
  auto b = assemble_e1_blocks(qn.coeffs(), params);
  return {std::move(b.a1), std::move(b.a2), std::move(b.a3), qn.nodes()};
}

UnimodularWitnessPair::UnimodularWitnessPair(const MatrixPoly2& qn, E1FreeParams params,
                                             ComplexMatrix z_inverse)
    : nodes_(qn.nodes()),
      a20_(qn.coeff(Coeff::a20)),
      a11_(qn.coeff(Coeff::a11)),
      a02_(qn.coeff(Coeff::a02)),
      params_(std::move(params)),
      z_inverse_(std::move(z_inverse)) {}

ComplexMatrix UnimodularWitnessPair::e(Complex lambda, Complex mu) const {
  const Index n = block_size();
  const NewtonScalars s = eval_newton_scalars(nodes_, lambda, mu);
  const ComplexMatrix id = identity(n);
  ComplexMatrix out = ComplexMatrix::Zero(3 * n, 3 * n);
  out.block(0, 0, n, n) = s.n1 * id;
  out.block(0, n, n, n) = id;
  out.block(n, 0, n, n) = s.m1 * id;
  out.block(n, 2 * n, n, n) = id;
  out.block(2 * n, 0, n, n) = id;
  return out;
}

ComplexMatrix UnimodularWitnessPair::w(Complex lambda, Complex mu) const {
  const Index n = block_size();
  const NewtonScalars s = eval_newton_scalars(nodes_, lambda, mu);
  const Complex gamma2 = lambda - nodes_.alpha2;
  const Complex gamma2_t = mu - nodes_.beta2;
  const ComplexMatrix z11 = params_.z1.topRows(n);
  const ComplexMatrix z12 = params_.z2.topRows(n);
  ComplexMatrix out(n, 2 * n);
  out.leftCols(n) = gamma2 * a20_ + s.m1 * params_.y11 + z11;
  out.rightCols(n) = s.n1 * (a11_ - params_.y11) + gamma2_t * a02_ + z12;
  return out;
}

ComplexMatrix UnimodularWitnessPair::f(Complex lambda, Complex mu) const {
  const Index n = block_size();
  ComplexMatrix out = ComplexMatrix::Zero(3 * n, 3 * n);
  out.topLeftCorner(n, n) = identity(n);
  out.topRightCorner(n, 2 * n) = -w(lambda, mu) * z_inverse_;
  out.bottomRightCorner(2 * n, 2 * n) = z_inverse_;
  return out;
}

Complex UnimodularWitnessPair::predicted_gamma() const { return Complex{1.0} / det(z_inverse_); }

UnimodularWitnessPair unimodular_witnesses(const MatrixPoly2& qn, const NewtonPencil& ln,
                                           const E1FreeParams& params, double tol) {
  params.validate_shapes();
  if (qn.size() != params.block_size() || ln.block_size() != qn.size()) {
    throw std::invalid_argument("unimodular_witnesses: block sizes differ");
  }
  if (!qn.compatible_nodes(ln.nodes())) {
    throw std::invalid_argument("unimodular_witnesses: pencil and polynomial nodes differ");
  }
  require_admissible(params, tol, "unimodular_witnesses");
  ComplexMatrix z_inv = params.z_block().partialPivLu().inverse();
  return {qn, params, std::move(z_inv)};
}

WitnessCheck check_witnesses(const UnimodularWitnessPair& witnesses, const NewtonPencil& ln,
                             const MatrixPoly2& qn, int samples, std::uint64_t seed) {
  const Index n = qn.size();
  WitnessCheck check;
  check.sample_count = samples;
  bool first = true;
  for (const auto& [lambda, mu] : sample_points(samples, seed)) {
    const ComplexMatrix e = witnesses.e(lambda, mu);
    const ComplexMatrix f = witnesses.f(lambda, mu);
    ComplexMatrix target = ComplexMatrix::Identity(3 * n, 3 * n);
    target.topLeftCorner(n, n) = eval_poly(qn, lambda, mu);
    const ComplexMatrix reduced = f * ln.eval(lambda, mu) * e;
    check.max_reduction_residual =
        std::max(check.max_reduction_residual, (reduced - target).norm() / target.norm());

    const Complex de = det(e);
    const Complex df = det(f);
    if (first) {
      check.det_e = de;
      check.det_f = df;
      first = false;
    } else {
      check.det_e_variation =
          std::max(check.det_e_variation, std::abs(de - check.det_e) / std::abs(check.det_e));
      check.det_f_variation =
          std::max(check.det_f_variation, std::abs(df - check.det_f) / std::abs(check.det_f));
    }
  }
  return check;
}

LinearizationReport verify_linearization(const NewtonPencil& ln, const MatrixPoly2& qn,
                                         const VerifyOptions& options) {
  if (ln.block_size() != qn.size()) {
    throw std::invalid_argument("verify_linearization: block sizes differ");
  }
  if (!qn.compatible_nodes(ln.nodes())) {
    throw std::invalid_argument("verify_linearization: pencil and polynomial nodes differ");
  }
  if (options.samples < 2) throw std::invalid_argument("verify_linearization: need two samples");

  const auto points = sample_points(options.samples, options.seed);
  std::vector<Complex> det_l;
  std::vector<Complex> det_q;
  bool all_singular = true;
  std::size_t ref = 0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& [lambda, mu] = points[k];
    const ComplexMatrix qv = eval_poly(qn, lambda, mu);
    det_q.push_back(det(qv));
    det_l.push_back(det(ln.eval(lambda, mu)));
    if (hadamard_ratio(qv) > options.tol) all_singular = false;
    if (std::abs(det_q[k]) > std::abs(det_q[ref])) ref = k;
  }

  LinearizationReport report;
  report.sample_count = options.samples;
  report.reference = points[ref];
  if (all_singular || det_q[ref] == Complex{}) {
    report.verdict = Verdict::inconclusive;
    return report;
  }
  report.gamma_estimate = det_l[ref] / det_q[ref];
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (k == ref) continue;
    const Complex predicted = report.gamma_estimate * det_q[k];
    const double denom = std::abs(predicted);
    const double dev = denom > 0.0 ? std::abs(det_l[k] - predicted) / denom
                                   : (det_l[k] == Complex{} ? 0.0 : HUGE_VAL);
    report.max_relative_deviation = std::max(report.max_relative_deviation, dev);
  }
  const bool ok = report.max_relative_deviation < options.tol &&
                  std::abs(report.gamma_estimate) > options.tol;
  report.verdict = ok ? Verdict::pass : Verdict::fail;
  return report;
}

GeneralAnsatzResult construct_general_ansatz(const MatrixPoly2& qn, const AnsatzVector& v,
                                             const std::optional<E1FreeParams>& params,
                                             const GeneralAnsatzOptions& options) {
  const Index n = qn.size();
  const Eigen::Matrix3cd m = select_M(v, options.row);
  const ComplexMatrix m_big = kron(ComplexMatrix(m), identity(n));
  const bool y11_free = m(1, 0) == Complex{} && m(2, 0) == Complex{};

  const auto transform = [&](const E1FreeParams& p) {
    E1FreeParams hat;
    hat.y11 = m(0, 0) * p.y11;
    hat.z1 = m_big * p.z1;
    hat.z2 = m_big * p.z2;
    return hat;
  };

  E1FreeParams chosen;
  E1FreeParams hat;
  bool default_z = false;
  int draws = 0;
  if (params) {
    chosen = *params;
    chosen.validate_shapes();
    if (chosen.block_size() != n) {
      throw std::invalid_argument("construct_general_ansatz: parameter block size differs");
    }
    if (!y11_free) chosen.y11.setZero();
    hat = transform(chosen);
    require_admissible(hat, options.tol, "construct_general_ansatz");
  } else {
    chosen.y11 = ComplexMatrix::Zero(n, n);
    const Eigen::Matrix2cd trailing = m.bottomRightCorner<2, 2>();
    const Eigen::Vector2d ts = Eigen::JacobiSVD<Eigen::Matrix2cd>(trailing).singularValues();
    if (ts(1) > 1e-12 * ts(0)) {
      // Z11 = Z12 = 0 and the trailing rows of M (x) I_n map the rest to I_2n.
      const ComplexMatrix low = kron(ComplexMatrix(trailing.inverse()), identity(n));
      chosen.z1 = ComplexMatrix::Zero(3 * n, n);
      chosen.z2 = ComplexMatrix::Zero(3 * n, n);
      chosen.z1.bottomRows(2 * n) = low.leftCols(n);
      chosen.z2.bottomRows(2 * n) = low.rightCols(n);
      hat = transform(chosen);
      default_z = true;
    } else {
      Rng rng(options.seed);
      bool found = false;
      while (draws < options.max_retries && !found) {
        ++draws;
        chosen.z1 = rng.matrix(3 * n, n);
        chosen.z2 = rng.matrix(3 * n, n);
        hat = transform(chosen);
        found = params_admissible(hat, 1e-6);
      }
      if (!found) {
        throw std::runtime_error("construct_general_ansatz: no admissible Z after " +
                                 std::to_string(draws) + " draws");
      }
    }
  }

  auto blocks = assemble_e1_blocks(qn.coeffs(), hat);
  NewtonPencil hat_pencil(std::move(blocks.a1), std::move(blocks.a2), std::move(blocks.a3),
                          qn.nodes());
  const ComplexMatrix m_inv_big = kron(ComplexMatrix(m.inverse()), identity(n));
  NewtonPencil pencil = hat_pencil.left_multiplied(m_inv_big);
  return GeneralAnsatzResult{m,         std::move(chosen), std::move(hat), std::move(hat_pencil),
                             std::move(pencil), y11_free,   default_z,      draws};
}

}  // namespace newton2pep
