#include "newton2pep/cli.hpp"
#include "newton2pep/two_param.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace newton2pep;

namespace {

CoeffArray to_coeffs(const std::vector<ComplexMatrix>& blocks) {
  if (blocks.size() != 6) throw std::invalid_argument("expected six coefficient blocks");
  CoeffArray c;
  for (int i = 0; i < 6; ++i) c[i] = blocks[i];
  return c;
}

const char* verdict_name(Verdict v) {
  return v == Verdict::pass ? "pass" : v == Verdict::fail ? "fail" : "inconclusive";
}

const char* membership_name(MembershipStatus s) {
  return s == MembershipStatus::member ? "member"
         : s == MembershipStatus::not_member ? "not_member"
                                             : "ill_posed";
}

py::dict membership_dict(const MembershipResult& r) {
  py::dict d;
  d["status"] = membership_name(r.status);
  d["residual"] = r.residual;
  d["ansatz"] = ComplexVector(r.ansatz.values);
  return d;
}

AnsatzVector ansatz_from(const ComplexVector& v, double tol) {
  if (v.size() != 3) throw std::invalid_argument("ansatz vector must have three entries");
  return AnsatzVector::classify(Eigen::Vector3cd(v), tol);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Linearizations of quadratic two-parameter matrix polynomials in the Newton basis";

  py::class_<NewtonNodes>(m, "NewtonNodes")
      .def(py::init([](Complex a1, Complex a2, Complex b1, Complex b2) {
             return NewtonNodes{a1, a2, b1, b2};
           }),
           py::arg("alpha1") = 0.0, py::arg("alpha2") = 0.0, py::arg("beta1") = 0.0,
           py::arg("beta2") = 0.0)
      .def_readwrite("alpha1", &NewtonNodes::alpha1)
      .def_readwrite("alpha2", &NewtonNodes::alpha2)
      .def_readwrite("beta1", &NewtonNodes::beta1)
      .def_readwrite("beta2", &NewtonNodes::beta2)
      .def("__eq__", [](const NewtonNodes& a, const NewtonNodes& b) { return a == b; })
      .def("__repr__", [](const NewtonNodes& z) {
        std::ostringstream ss;
        ss << "NewtonNodes(alpha=(" << z.alpha1 << ", " << z.alpha2 << "), beta=(" << z.beta1
           << ", " << z.beta2 << "))";
        return ss.str();
      });

  py::class_<MatrixPoly2>(m, "MatrixPoly2")
      .def_static("monomial",
                  [](const std::vector<ComplexMatrix>& c) { return MatrixPoly2::monomial(to_coeffs(c)); },
                  py::arg("coeffs"),
                  "Coefficients in the order A20, A11, A02, A10, A01, A00.")
      .def_static("newton",
                  [](const std::vector<ComplexMatrix>& c, const NewtonNodes& z) {
                    return MatrixPoly2::newton(to_coeffs(c), z);
                  },
                  py::arg("coeffs"), py::arg("nodes"))
      .def_property_readonly("size", &MatrixPoly2::size)
      .def_property_readonly("basis", [](const MatrixPoly2& q) {
        return q.basis() == Basis::newton ? "newton" : "monomial";
      })
      .def_property_readonly("nodes", &MatrixPoly2::nodes)
      .def_property_readonly("coeffs", [](const MatrixPoly2& q) {
        return std::vector<ComplexMatrix>(q.coeffs().begin(), q.coeffs().end());
      })
      .def("__call__", [](const MatrixPoly2& q, Complex l, Complex mu) { return eval_poly(q, l, mu); });

  m.def("newton_to_monomial", &newton_to_monomial, py::arg("q"));
  m.def("as_newton", &as_newton, py::arg("q"));

  py::class_<MonomialPencil>(m, "MonomialPencil")
      .def(py::init<ComplexMatrix, ComplexMatrix, ComplexMatrix>(), py::arg("l1"), py::arg("l2"),
           py::arg("l0"))
      .def_property_readonly("l1", &MonomialPencil::l1)
      .def_property_readonly("l2", &MonomialPencil::l2)
      .def_property_readonly("l0", &MonomialPencil::l0)
      .def("__call__", &MonomialPencil::eval);

  py::class_<NewtonPencil>(m, "NewtonPencil")
      .def(py::init<ComplexMatrix, ComplexMatrix, ComplexMatrix, NewtonNodes>(), py::arg("a1"),
           py::arg("a2"), py::arg("a3"), py::arg("nodes"))
      .def_property_readonly("a1", &NewtonPencil::a1)
      .def_property_readonly("a2", &NewtonPencil::a2)
      .def_property_readonly("a3", &NewtonPencil::a3)
      .def_property_readonly("nodes", &NewtonPencil::nodes)
      .def("__call__", &NewtonPencil::eval);

  py::class_<E1FreeParams>(m, "E1FreeParams")
      .def(py::init([](ComplexMatrix y11, ComplexMatrix z1, ComplexMatrix z2) {
             E1FreeParams p{std::move(y11), std::move(z1), std::move(z2)};
             p.validate_shapes();
             return p;
           }),
           py::arg("y11"), py::arg("z1"), py::arg("z2"))
      .def_readonly("y11", &E1FreeParams::y11)
      .def_readonly("z1", &E1FreeParams::z1)
      .def_readonly("z2", &E1FreeParams::z2)
      .def("z_block", &E1FreeParams::z_block);

  m.def("companion_params", &companion_params, py::arg("q"));
  m.def("random_params", [](Index n, std::uint64_t seed) {
    Rng rng(seed);
    return random_params(n, rng);
  }, py::arg("n"), py::arg("seed") = 0);
  m.def("companion_pencil", &companion_pencil, py::arg("q"));
  m.def("construct_e1_newton", &construct_e1_newton, py::arg("qn"), py::arg("params"),
        py::arg("tol") = kDefaultTol);
  m.def("transfer_to_newton", &transfer_to_newton, py::arg("pencil"), py::arg("qn"));

  m.def("membership_newton",
        [](const NewtonPencil& l, const MatrixPoly2& qn, int samples, double tol, std::uint64_t seed) {
          return membership_dict(membership_newton(l, qn, MembershipOptions{samples, tol, seed}));
        },
        py::arg("pencil"), py::arg("qn"), py::arg("samples") = 12, py::arg("tol") = kDefaultTol,
        py::arg("seed") = 0);

  m.def("verify_linearization",
        [](const NewtonPencil& l, const MatrixPoly2& qn, int samples, double tol, std::uint64_t seed) {
          const LinearizationReport r = verify_linearization(l, qn, VerifyOptions{samples, tol, seed});
          py::dict d;
          d["verdict"] = verdict_name(r.verdict);
          d["gamma"] = r.gamma_estimate;
          d["max_relative_deviation"] = r.max_relative_deviation;
          d["samples"] = r.sample_count;
          return d;
        },
        py::arg("pencil"), py::arg("qn"), py::arg("samples") = 12, py::arg("tol") = kDefaultTol,
        py::arg("seed") = 0);

  m.def("select_M",
        [](const ComplexVector& v, bool alt_row, double tol) {
          return Eigen::Matrix3cd(
              select_M(ansatz_from(v, tol), alt_row ? AppendixRow::second : AppendixRow::first));
        },
        py::arg("v"), py::arg("alt_row") = false, py::arg("tol") = kDefaultTol);

  m.def("construct_general_ansatz",
        [](const MatrixPoly2& qn, const ComplexVector& v, std::optional<E1FreeParams> params,
           std::uint64_t seed, bool alt_row, double tol) {
          GeneralAnsatzOptions o;
          o.tol = tol;
          o.seed = seed;
          o.row = alt_row ? AppendixRow::second : AppendixRow::first;
          GeneralAnsatzResult r = construct_general_ansatz(qn, ansatz_from(v, tol), params, o);
          py::dict d;
          d["pencil"] = r.pencil;
          d["hat_pencil"] = r.hat_pencil;
          d["M"] = r.m;
          d["hat_params"] = r.hat_params;
          d["default_z"] = r.default_z;
          d["random_draws"] = r.random_draws;
          return d;
        },
        py::arg("qn"), py::arg("v"), py::arg("params") = std::nullopt, py::arg("seed") = 0,
        py::arg("alt_row") = false, py::arg("tol") = kDefaultTol);

  m.def("certify_delta_singular",
        [](const NewtonPencil& l1, const NewtonPencil& l2, double tol) {
          const DeltaTriple d = delta_operators(l1, l2);
          const SingularityCertificate c = certify_singular(d, tol);
          py::dict out;
          out["delta0"] = d.delta0;
          out["delta1"] = d.delta1;
          out["delta2"] = d.delta2;
          out["singular"] = c.is_singular;
          out["sigma_min"] = c.sigma_min;
          out["frobenius_norm"] = c.frobenius_norm;
          out["nullity_estimate"] = c.nullity_estimate;
          return out;
        },
        py::arg("l1"), py::arg("l2"), py::arg("tol") = 1e-7);

  m.def("spectrum_slice",
        [](const MatrixPoly2& qn, Complex mu, double tol) {
          return spectrum_slice(qn, mu, tol).eigenvalues;
        },
        py::arg("qn"), py::arg("mu"), py::arg("tol") = 1e-8);

  m.def("spectrum_pair",
        [](const MatrixPoly2& q1, const MatrixPoly2& q2) {
          const SpectrumSample s = spectrum_pair_oracle(QtepPair(q1, q2));
          if (s.status == PairSpectrumStatus::shared_factor) {
            throw std::runtime_error("pair has a shared factor: infinitely many common zeros");
          }
          std::vector<std::tuple<Complex, Complex, double>> pts;
          for (const auto& p : s.points) pts.emplace_back(p.lambda, p.mu, p.residual);
          return pts;
        },
        py::arg("q1"), py::arg("q2"));

  m.def("run_cli",
        [](const std::vector<std::string>& args) {
          std::ostringstream out, err;
          const int code = run_cli(args, out, err);
          return std::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command line in-process; returns (exit_code, stdout, stderr).");
}
