#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace newton2pep;
using testutil::rel_diff;

namespace {

ComplexMatrix eye(Index n) { return ComplexMatrix::Identity(n, n); }

// Scalar quadratic q(l, m) for n = 1 monomial input.
Complex scalar_q(const MatrixPoly2& q, Complex l, Complex m) { return eval_poly(q, l, m)(0, 0); }

}  // namespace

TEST(Companion, BlockLayout) {
  Rng rng(41);
  const MatrixPoly2 q = testutil::random_monomial(2, rng);
  const MonomialPencil c = companion_pencil(q);
  const auto blk = [](const ComplexMatrix& m, int i, int j) { return m.block(2 * i, 2 * j, 2, 2); };
  const ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  EXPECT_EQ(blk(c.l1(), 0, 0), q.coeff(Coeff::a20));
  EXPECT_EQ(blk(c.l1(), 0, 1), q.coeff(Coeff::a11));
  EXPECT_EQ(blk(c.l2(), 0, 1), q.coeff(Coeff::a02));
  EXPECT_EQ(blk(c.l0(), 0, 0), q.coeff(Coeff::a10));
  EXPECT_EQ(blk(c.l0(), 0, 1), q.coeff(Coeff::a01));
  EXPECT_EQ(blk(c.l0(), 0, 2), q.coeff(Coeff::a00));
  EXPECT_EQ(blk(c.l1(), 2, 2), eye(2));
  EXPECT_EQ(blk(c.l2(), 1, 2), eye(2));
  EXPECT_EQ(blk(c.l0(), 1, 1), -eye(2));
  EXPECT_EQ(blk(c.l0(), 2, 0), -eye(2));
  EXPECT_EQ(blk(c.l2(), 0, 0), z);
  EXPECT_EQ(blk(c.l1(), 0, 2), z);
  EXPECT_EQ(blk(c.l1(), 1, 2), z);
  // Identity to rounding.
  for (const auto& [l, m] : sample_points(12, 41)) {
    const ComplexMatrix lhs = c.eval(l, m) * kron(ComplexMatrix(lambda3(l, m)), eye(2));
    EXPECT_LT(rel_diff(lhs, kron(ComplexMatrix(Eigen::Vector3cd::UnitX()), eval_poly(q, l, m))),
              1e-14);
  }
}

TEST(Companion, ScalarDeterminantIsMinusQ) {
  // det C by cofactor expansion on the 3x3 pencil, independent of LU.
  Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const MatrixPoly2 q = testutil::random_monomial(1, rng);
    const MonomialPencil c = companion_pencil(q);
    const Complex l = rng.annulus();
    const Complex m = rng.annulus();
    const Complex cof = testutil::cofactor_det(c.eval(l, m));
    EXPECT_LT(rel_diff(cof, -scalar_q(q, l, m)), 1e-12);
    EXPECT_LT(rel_diff(det(c.eval(l, m)), cof), 1e-12);
  }
}

TEST(Companion, MatchesE1Construction) {
  Rng rng(43);
  const MatrixPoly2 q = testutil::random_monomial(3, rng);
  const MonomialPencil c = companion_pencil(q);
  const MonomialPencil e = construct_e1_monomial(q, companion_params(q));
  EXPECT_EQ(c.l1(), e.l1());
  EXPECT_EQ(c.l2(), e.l2());
  EXPECT_EQ(c.l0(), e.l0());
  EXPECT_THROW(companion_pencil(testutil::random_newton(2, rng)), std::invalid_argument);
}

TEST(E1Newton, AnsatzIdentityAtThousandPoints) {
  Rng rng(44);
  for (Index n = 1; n <= 3; ++n) {
    const MatrixPoly2 qn = testutil::random_newton(n, rng);
    const NewtonPencil ln = construct_e1_newton(qn, random_params(n, rng));
    const ComplexMatrix e1 = Eigen::Vector3cd::UnitX();
    for (const auto& [l, m] : sample_points(1000, 44 + n)) {
      const ComplexMatrix lhs = ln.eval(l, m) * kron(ComplexMatrix(newton3(qn.nodes(), l, m)), eye(n));
      const ComplexMatrix rhs = kron(e1, testutil::newton_eval_by_hand(qn, l, m));
      EXPECT_LT((lhs - rhs).norm() / (ln.eval(l, m).norm() * newton3(qn.nodes(), l, m).norm()),
                1e-13);
    }
  }
}

TEST(E1Newton, DeterminantCondition) {
  Rng rng(45);
  const MatrixPoly2 qn = testutil::random_newton(2, rng);
  E1FreeParams p = random_params(2, rng);
  EXPECT_TRUE(params_admissible(p));
  p.z1.bottomRows(4).setZero();
  p.z2.bottomRows(4).setZero();
  EXPECT_FALSE(params_admissible(p));
  try {
    construct_e1_newton(qn, p);
    FAIL() << "expected std::invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("Z-block determinant condition violated"), std::string::npos);
  }
  // The assembled pencil is singular everywhere.
  const auto blocks = assemble_e1_blocks(qn.coeffs(), p);
  const NewtonPencil ln(blocks.a1, blocks.a2, blocks.a3, qn.nodes());
  for (const auto& [l, m] : sample_points(12, 45)) EXPECT_LT(hadamard_ratio(ln.eval(l, m)), 1e-13);
  const LinearizationReport rep = verify_linearization(ln, qn);
  EXPECT_NE(rep.verdict, Verdict::pass);
}

TEST(E1Newton, ShapeValidation) {
  Rng rng(46);
  const MatrixPoly2 qn = testutil::random_newton(2, rng);
  E1FreeParams p = random_params(3, rng);
  EXPECT_THROW(construct_e1_newton(qn, p), std::invalid_argument);
  p = random_params(2, rng);
  p.z1 = rng.matrix(5, 2);
  EXPECT_THROW(construct_e1_newton(qn, p), std::invalid_argument);
}

TEST(Witnesses, ReduceToDiagQI) {
  Rng rng(47);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 1 + trial % 3;
    const MatrixPoly2 qn = testutil::random_newton(n, rng);
    const E1FreeParams p = random_params(n, rng);
    const NewtonPencil ln = construct_e1_newton(qn, p);
    const UnimodularWitnessPair w = unimodular_witnesses(qn, ln, p);
    // Direct check at a few points, independent of check_witnesses.
    for (const auto& [l, m] : sample_points(5, trial)) {
      ComplexMatrix target = ComplexMatrix::Zero(3 * n, 3 * n);
      target.topLeftCorner(n, n) = testutil::newton_eval_by_hand(qn, l, m);
      target.bottomRightCorner(2 * n, 2 * n) = eye(2 * n);
      const ComplexMatrix got = w.f(l, m) * ln.eval(l, m) * w.e(l, m);
      EXPECT_LT((got - target).norm() / target.norm(), 1e-10);
      EXPECT_LT(std::abs(det(w.e(l, m)) - det(w.e(0.3, -0.7))), 1e-10 * std::abs(det(w.e(0.3, -0.7))));
    }
    const WitnessCheck c = check_witnesses(w, ln, qn);
    EXPECT_TRUE(c.passed(1e-8)) << c.max_reduction_residual;
    // det L = det Z * det Q.
    const auto [l, m] = sample_points(1, 100 + trial)[0];
    EXPECT_LT(rel_diff(det(ln.eval(l, m)), w.predicted_gamma() * det(eval_poly(qn, l, m))), 1e-9);
    EXPECT_LT(rel_diff(w.predicted_gamma(), det(p.z_block())), 1e-12);
  }
}

TEST(Witnesses, RejectSingularZ) {
  Rng rng(48);
  const MatrixPoly2 qn = testutil::random_newton(1, rng);
  const E1FreeParams p = random_params(1, rng);
  const NewtonPencil ln = construct_e1_newton(qn, p);
  E1FreeParams bad = p;
  bad.z1.bottomRows(2).setZero();
  bad.z2.bottomRows(2).setZero();
  EXPECT_THROW(unimodular_witnesses(qn, ln, bad), std::invalid_argument);
}

TEST(VerifyLinearization, CompanionGammaIsMinusOneForScalar) {
  Rng rng(49);
  const MatrixPoly2 q = testutil::random_monomial(1, rng);
  const MatrixPoly2 qn = as_newton(q);
  const NewtonPencil ln = transfer_to_newton(companion_pencil(q), qn);
  const LinearizationReport r = verify_linearization(ln, qn);
  EXPECT_EQ(r.verdict, Verdict::pass);
  EXPECT_LT(std::abs(r.gamma_estimate + 1.0), 1e-10);
  EXPECT_EQ(r.sample_count, 12);
}

TEST(VerifyLinearization, CorruptedPencilFails) {
  Rng rng(50);
  const MatrixPoly2 qn = testutil::random_newton(2, rng);
  const NewtonPencil ln = construct_e1_newton(qn, random_params(2, rng));
  ComplexMatrix a3 = ln.a3();
  a3(0, 5) += 0.1;
  const NewtonPencil bad(ln.a1(), ln.a2(), a3, ln.nodes());
  EXPECT_EQ(verify_linearization(bad, qn).verdict, Verdict::fail);
  EXPECT_FALSE(membership_newton(bad, qn).is_member());
}

TEST(VerifyLinearization, DegeneratePolynomialIsInconclusive) {
  Rng rng(51);
  CoeffArray c;
  for (auto& m : c) m = ComplexMatrix::Zero(2, 2);
  // Rank one everywhere: det Q vanishes identically.
  const ComplexMatrix r1 = rng.matrix(2, 1) * rng.matrix(1, 2);
  c[0] = r1;
  c[5] = 2.0 * r1;
  const MatrixPoly2 qn = MatrixPoly2::newton(c, testutil::random_nodes(rng));
  const NewtonPencil ln = construct_e1_newton(qn, random_params(2, rng));
  EXPECT_EQ(verify_linearization(ln, qn).verdict, Verdict::inconclusive);
}

TEST(GeneralAnsatz, E1MatchesDirectConstruction) {
  Rng rng(52);
  const MatrixPoly2 qn = testutil::random_newton(2, rng);
  const E1FreeParams p = random_params(2, rng);
  const auto r = construct_general_ansatz(qn, AnsatzVector::classify(Eigen::Vector3cd::UnitX()), p);
  Eigen::Matrix3cd expected_m;
  expected_m << 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0;
  EXPECT_LT((r.m - expected_m).norm(), 1e-15);
  EXPECT_TRUE(r.y11_free);
  EXPECT_EQ(r.params.y11, p.y11);
  // Same pencil as the direct construction once Z is replaced by (M (x) I) Z.
  const NewtonPencil direct = construct_e1_newton(qn, r.hat_params);
  EXPECT_LT(rel_diff(r.hat_pencil.a1(), direct.a1()), 1e-15);
  EXPECT_LT(rel_diff(r.hat_pencil.a2(), direct.a2()), 1e-15);
  EXPECT_LT(rel_diff(r.hat_pencil.a3(), direct.a3()), 1e-15);
  EXPECT_EQ(r.hat_params.z1.topRows(2), p.z1.topRows(2));
  const MembershipResult mem = membership_newton(r.pencil, qn);
  ASSERT_TRUE(mem.is_member());
  EXPECT_LT((mem.ansatz.values - Eigen::Vector3cd::UnitX()).norm(), 1e-9);
}

TEST(GeneralAnsatz, Y11RuleAndDefaultZ) {
  Rng rng(53);
  const MatrixPoly2 qn = testutil::random_newton(2, rng);
  const E1FreeParams p = random_params(2, rng);
  const auto r = construct_general_ansatz(qn, AnsatzVector::classify({1.0, 2.0, 3.0}), p);
  EXPECT_FALSE(r.y11_free);
  EXPECT_EQ(r.params.y11.norm(), 0.0);
  const auto d = construct_general_ansatz(qn, AnsatzVector::classify({1.0, 2.0, 3.0}));
  EXPECT_TRUE(d.default_z);
  EXPECT_EQ(d.random_draws, 0);
  EXPECT_LT((d.hat_params.z_block() - eye(4)).norm(), 1e-13);
}

TEST(GeneralAnsatz, RandomFallbackForSingularTrailingBlock) {
  Rng rng(54);
  const MatrixPoly2 qn = testutil::random_newton(2, rng);
  for (const Eigen::Vector3cd v : {Eigen::Vector3cd(0.0, 2.0, 3.0), Eigen::Vector3cd(0.0, 0.0, 3.0),
                                   Eigen::Vector3cd(0.0, 2.0, 0.0)}) {
    const auto r = construct_general_ansatz(qn, AnsatzVector::classify(v));
    EXPECT_FALSE(r.default_z);
    EXPECT_GE(r.random_draws, 1);
    EXPECT_TRUE(params_admissible(r.hat_params, 1e-6));
    // Same seed, same draw.
    const auto again = construct_general_ansatz(qn, AnsatzVector::classify(v));
    EXPECT_EQ(r.pencil.a3(), again.pencil.a3());
  }
}

TEST(GeneralAnsatz, EveryPatternLinearizes) {
  Rng rng(55);
  for (const Eigen::Vector3cd v :
       {Eigen::Vector3cd(1.0, 2.0, 3.0), Eigen::Vector3cd(0.0, 2.0, 3.0), Eigen::Vector3cd(0.0, 0.0, 3.0),
        Eigen::Vector3cd(1.0, 0.0, 3.0), Eigen::Vector3cd(1.0, 0.0, 0.0), Eigen::Vector3cd(1.0, 2.0, 0.0),
        Eigen::Vector3cd(0.0, 2.0, 0.0)}) {
    for (AppendixRow row : {AppendixRow::first, AppendixRow::second}) {
      const MatrixPoly2 qn = testutil::random_newton(2, rng);
      GeneralAnsatzOptions opts;
      opts.row = row;
      const auto r = construct_general_ansatz(qn, AnsatzVector::classify(v), std::nullopt, opts);
      const MembershipResult mem = membership_newton(r.pencil, qn);
      ASSERT_TRUE(mem.is_member()) << v.transpose();
      EXPECT_LT((mem.ansatz.values - v).norm(), 1e-9 * v.norm());
      EXPECT_EQ(verify_linearization(r.pencil, qn).verdict, Verdict::pass) << v.transpose();
      EXPECT_TRUE(membership_newton(r.hat_pencil, qn).is_member());
    }
  }
}

TEST(GeneralAnsatz, RejectsZeroAndInadmissibleParams) {
  Rng rng(56);
  const MatrixPoly2 qn = testutil::random_newton(1, rng);
  EXPECT_THROW(construct_general_ansatz(qn, AnsatzVector::classify(Eigen::Vector3cd::Zero())),
               std::invalid_argument);
  E1FreeParams p = random_params(1, rng);
  p.z1.setZero();
  p.z2.setZero();
  EXPECT_THROW(construct_general_ansatz(qn, AnsatzVector::classify({1.0, 1.0, 1.0}), p),
               std::invalid_argument);
}
