#include "newton2pep/cli.hpp"

#include "newton2pep/io.hpp"
#include "newton2pep/two_param.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace newton2pep {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::optional<std::uint64_t> seed;
  std::string report_path;
  bool timings = false;
};

struct ConstructArgs {
  std::string problem;
  bool companion = false;
  std::string ansatz;
  std::string params;
  std::string out;
  bool alt_row = false;
  double tol = kDefaultTol;
  int samples = 12;
};

struct VerifyArgs {
  std::string problem;
  std::string pencil;
  int samples = 12;
  double tol = kDefaultTol;
};

struct TransferArgs {
  std::string pencil;
  std::string problem;
  std::string out;
  int samples = 12;
  double tol = kDefaultTol;
};

struct DeltaArgs {
  std::vector<std::string> problems;
  std::vector<std::string> pencils;
  std::vector<std::string> params;
  bool check_singular = false;
  double singular_tol = 1e-7;
  double tol = kDefaultTol;
};

struct SpectrumArgs {
  std::vector<std::string> inputs;
  int slices = 5;
  std::string pair;
  std::string csv;
  double match_tol = 1e-6;
  double residual_tol = 1e-8;
};

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "fail";
}

const char* membership_name(MembershipStatus s) {
  switch (s) {
    case MembershipStatus::member: return "member";
    case MembershipStatus::not_member: return "not_member";
    case MembershipStatus::ill_posed: return "ill_posed";
  }
  return "not_member";
}

Json vector_to_json(const Eigen::Vector3cd& v) {
  Json a = Json::array();
  for (int i = 0; i < 3; ++i) a.push_back(complex_to_json(v(i)));
  return a;
}

Json membership_to_json(const MembershipResult& m) {
  Json j;
  j["status"] = membership_name(m.status);
  j["residual"] = m.residual;
  j["samples"] = m.sample_count;
  if (m.is_member()) j["ansatz"] = vector_to_json(m.ansatz.values);
  return j;
}

std::uint64_t resolve_seed(const Common& common) {
  if (common.seed) return *common.seed;
  if (const char* env = std::getenv("NEWTON2PEP_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      throw UsageError(std::string("NEWTON2PEP_SEED is not an unsigned integer: ") + env);
    }
  }
  return 0;
}

Eigen::Vector3cd parse_ansatz(const std::string& text) {
  Eigen::Vector3cd v;
  std::stringstream ss(text);
  std::string item;
  int k = 0;
  while (std::getline(ss, item, ',')) {
    if (k == 3) throw UsageError("--ansatz expects exactly three comma-separated numbers");
    try {
      std::size_t used = 0;
      v(k) = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--ansatz: not a number: '" + item + "'");
    }
    ++k;
  }
  if (k != 3) throw UsageError("--ansatz expects exactly three comma-separated numbers");
  return v;
}

// A monomial polynomial is treated as a Newton polynomial with zero nodes and
// a monomial pencil as a Newton pencil over the same nodes.
NewtonPencil newton_view(const PencilFile& file, const MatrixPoly2& qn) {
  if (const auto* np = std::get_if<NewtonPencil>(&file.pencil)) return *np;
  const auto& mp = std::get<MonomialPencil>(file.pencil);
  if (!qn.nodes().is_zero()) {
    throw std::invalid_argument("node mismatch: monomial pencil against a polynomial with nonzero nodes");
  }
  return transfer_to_newton(mp, qn);
}

void require_compatible(const MatrixPoly2& q, const NewtonPencil& ln) {
  if (q.size() != ln.block_size()) {
    throw std::invalid_argument("block size mismatch: polynomial n=" + std::to_string(q.size()) +
                                ", pencil n=" + std::to_string(ln.block_size()));
  }
  if (!q.compatible_nodes(ln.nodes())) {
    throw std::invalid_argument("node mismatch between polynomial and pencil");
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::string format_double(double x) {
  std::ostringstream ss;
  ss << std::setprecision(17) << x;
  return ss.str();
}

std::string csv_header() { return "re_lambda,im_lambda,re_mu,im_mu,residual\n"; }

std::string csv_row(Complex lambda, Complex mu, double residual) {
  return format_double(lambda.real()) + "," + format_double(lambda.imag()) + "," +
         format_double(mu.real()) + "," + format_double(mu.imag()) + "," +
         format_double(residual) + "\n";
}

int cmd_construct(const ConstructArgs& a, std::uint64_t seed, Json& report) {
  if (a.companion == !a.ansatz.empty()) {
    throw UsageError("construct needs exactly one of --companion or --ansatz");
  }
  const MatrixPoly2 q = load_problem(a.problem);
  const Index n = q.size();

  std::optional<E1FreeParams> params;
  if (!a.params.empty()) {
    if (a.companion) throw UsageError("--params cannot be combined with --companion");
    if (a.params == "seed") {
      Rng rng(seed);
      params = random_params(n, rng);
    } else {
      params = load_params(a.params, n);
    }
  }

  PencilProvenance prov;
  std::optional<PencilFile> file;
  if (a.companion) {
    prov.construction = "companion";
    prov.params = companion_params(q);
    if (q.basis() == Basis::monomial) {
      file = PencilFile{companion_pencil(q), std::nullopt};
    } else {
      file = PencilFile{construct_e1_newton(q, *prov.params, a.tol), std::nullopt};
    }
  } else {
    const AnsatzVector v = AnsatzVector::classify(parse_ansatz(a.ansatz), a.tol);
    if (v.is_zero()) throw UsageError("--ansatz must be nonzero");
    GeneralAnsatzOptions opts;
    opts.tol = a.tol;
    opts.seed = seed;
    opts.row = a.alt_row ? AppendixRow::second : AppendixRow::first;
    GeneralAnsatzResult r = construct_general_ansatz(q, v, params, opts);
    prov.construction = "ansatz";
    prov.ansatz = v.values;
    prov.m = r.m;
    prov.params = r.hat_params;
    report["default_z"] = r.default_z;
    report["random_draws"] = r.random_draws;
    if (q.basis() == Basis::monomial) {
      file = PencilFile{MonomialPencil(r.pencil.a1(), r.pencil.a2(), r.pencil.a3()), std::nullopt};
    } else {
      file = PencilFile{std::move(r.pencil), std::nullopt};
    }
  }
  file->provenance = prov;

  const MatrixPoly2 qn = as_newton(q);
  const MembershipResult mem =
      membership_newton(newton_view(*file, qn), qn, MembershipOptions{a.samples, a.tol, seed});
  report["construction"] = prov.construction;
  report["n"] = n;
  report["basis"] = q.basis() == Basis::newton ? "newton" : "monomial";
  if (prov.m) report["M"] = matrix_to_json(*prov.m);
  report["membership"] = membership_to_json(mem);

  const std::string text = pencil_to_json(*file).dump(2) + "\n";
  if (!a.out.empty()) {
    write_file(a.out, text);
    report["output"] = a.out;
  } else {
    report["pencil"] = pencil_to_json(*file);
  }
  const bool ok = mem.is_member();
  report["verdict"] = ok ? "pass" : "fail";
  return ok ? kExitPass : kExitFail;
}

int cmd_verify(const VerifyArgs& a, std::uint64_t seed, Json& report) {
  const MatrixPoly2 q = load_problem(a.problem);
  const PencilFile pf = load_pencil(a.pencil);
  const MatrixPoly2 qn = as_newton(q);
  const NewtonPencil ln = newton_view(pf, qn);
  require_compatible(qn, ln);

  const MembershipResult mem = membership_newton(ln, qn, MembershipOptions{a.samples, a.tol, seed});
  const LinearizationReport lin = verify_linearization(ln, qn, VerifyOptions{a.samples, a.tol, seed});
  report["membership"] = membership_to_json(mem);

  Json lj;
  lj["verdict"] = verdict_name(lin.verdict);
  lj["gamma"] = complex_to_json(lin.gamma_estimate);
  lj["max_relative_deviation"] = lin.max_relative_deviation;
  lj["samples"] = lin.sample_count;
  lj["reference"] = Json::array({complex_to_json(lin.reference.first),
                                 complex_to_json(lin.reference.second)});
  report["linearization"] = lj;

  bool witnesses_ok = true;
  if (pf.provenance && pf.provenance->params) {
    Json wj;
    try {
      const NewtonPencil hat =
          pf.provenance->m
              ? ln.left_multiplied(kron(ComplexMatrix(*pf.provenance->m),
                                        ComplexMatrix::Identity(qn.size(), qn.size())))
              : ln;
      const UnimodularWitnessPair w = unimodular_witnesses(qn, hat, *pf.provenance->params, a.tol);
      const WitnessCheck c = check_witnesses(w, hat, qn, a.samples, seed);
      witnesses_ok = c.passed(a.tol);
      wj["status"] = witnesses_ok ? "pass" : "fail";
      wj["max_reduction_residual"] = c.max_reduction_residual;
      wj["det_e"] = complex_to_json(c.det_e);
      wj["det_f"] = complex_to_json(c.det_f);
      wj["det_e_variation"] = c.det_e_variation;
      wj["det_f_variation"] = c.det_f_variation;
      wj["predicted_gamma"] = complex_to_json(w.predicted_gamma());
    } catch (const std::invalid_argument& e) {
      witnesses_ok = false;
      wj["status"] = "fail";
      wj["error"] = e.what();
    }
    report["witnesses"] = wj;
  }

  int code = kExitFail;
  if (lin.verdict == Verdict::inconclusive || mem.status == MembershipStatus::ill_posed) {
    code = kExitInconclusive;
  } else if (lin.verdict == Verdict::pass && mem.is_member() && witnesses_ok) {
    code = kExitPass;
  }
  report["verdict"] = code == kExitPass ? "pass" : code == kExitFail ? "fail" : "inconclusive";
  return code;
}

int cmd_transfer(const TransferArgs& a, std::uint64_t seed, Json& report) {
  const PencilFile pf = load_pencil(a.pencil);
  const MatrixPoly2 qn = load_problem(a.problem);
  const auto* mp = std::get_if<MonomialPencil>(&pf.pencil);
  if (mp == nullptr) throw UsageError("transfer expects a monomial pencil file");
  if (qn.size() != mp->block_size()) throw std::invalid_argument("block size mismatch");

  const MembershipOptions opts{a.samples, a.tol, seed};
  const MatrixPoly2 partner = monomial_partner(qn);
  const MembershipResult before = membership_monomial(*mp, partner, opts);
  const NewtonPencil ln = transfer_to_newton(*mp, qn);
  const MembershipResult after = membership_newton(ln, as_newton(qn), opts);
  report["monomial_membership"] = membership_to_json(before);
  report["newton_membership"] = membership_to_json(after);

  bool ok = before.is_member() && after.is_member();
  if (ok) {
    const double gap = (before.ansatz.values - after.ansatz.values).norm();
    report["ansatz_gap"] = gap;
    ok = gap <= std::max(a.tol, 1e-8) * (1.0 + before.ansatz.values.norm());
  }
  PencilFile outf{ln, pf.provenance};
  if (outf.provenance) outf.provenance->construction = "transfer";
  if (!a.out.empty()) {
    write_file(a.out, pencil_to_json(outf).dump(2) + "\n");
    report["output"] = a.out;
  } else {
    report["pencil"] = pencil_to_json(outf);
  }
  report["verdict"] = ok ? "pass" : "fail";
  return ok ? kExitPass : kExitFail;
}

int cmd_delta(const DeltaArgs& a, std::uint64_t seed, Json& report) {
  std::optional<NewtonPencil> l1;
  std::optional<NewtonPencil> l2;
  if (!a.pencils.empty()) {
    if (!a.problems.empty() || !a.params.empty()) {
      throw UsageError("--pencils cannot be combined with problem files or --params");
    }
    if (a.pencils.size() != 2) throw UsageError("--pencils expects two files");
    const PencilFile f1 = load_pencil(a.pencils[0]);
    const PencilFile f2 = load_pencil(a.pencils[1]);
    const auto view = [](const PencilFile& f) {
      if (const auto* np = std::get_if<NewtonPencil>(&f.pencil)) return *np;
      const auto& mp = std::get<MonomialPencil>(f.pencil);
      return NewtonPencil(mp.l1(), mp.l2(), mp.l0(), NewtonNodes{});
    };
    l1 = view(f1);
    l2 = view(f2);
    if (!(l1->nodes() == l2->nodes())) throw std::invalid_argument("node mismatch between pencils");
    report["params"] = "from pencil files";
  } else {
    if (a.problems.size() != 2) throw UsageError("delta expects two problem files");
    const QtepPair pair(as_newton(load_problem(a.problems[0])),
                        as_newton(load_problem(a.problems[1])));
    E1FreeParams p1;
    E1FreeParams p2;
    std::string mode = "companion";
    if (a.params.empty() || (a.params.size() == 1 && a.params[0] == "companion")) {
      p1 = companion_params(pair.first());
      p2 = companion_params(pair.second());
    } else if (a.params.size() == 1 && a.params[0] == "seed") {
      Rng rng(seed);
      p1 = random_params(pair.first().size(), rng);
      p2 = random_params(pair.second().size(), rng);
      mode = "seed";
    } else if (a.params.size() == 2) {
      p1 = load_params(a.params[0], pair.first().size());
      p2 = load_params(a.params[1], pair.second().size());
      mode = "file";
    } else {
      throw UsageError("--params expects 'companion', 'seed' or two parameter files");
    }
    report["params"] = mode;
    PairPencils pp = pair_linearize(pair, p1, p2, a.tol);
    l1 = std::move(pp.first);
    l2 = std::move(pp.second);
  }

  const DeltaTriple d = delta_operators(*l1, *l2);
  const SingularityCertificate cert = certify_singular(d, a.singular_tol);
  report["k1"] = d.k1;
  report["k2"] = d.k2;
  report["delta_size"] = d.delta0.rows();
  report["sigma_min"] = cert.sigma_min;
  report["frobenius_norm"] = cert.frobenius_norm;
  report["threshold"] = cert.threshold;
  report["nullity_estimate"] = cert.nullity_estimate;
  Json blocks = Json::array();
  for (const auto& row : cert.zero_blocks) blocks.push_back(Json::array({row[0], row[1], row[2]}));
  report["zero_blocks"] = blocks;
  report["block_triangular_zero_diagonal"] = cert.block_triangular_zero_diagonal;
  if (cert.kernel_witness_residual) report["kernel_witness_residual"] = *cert.kernel_witness_residual;
  report["singular"] = cert.is_singular;

  int code = kExitPass;
  if (a.check_singular) code = cert.is_singular ? kExitPass : kExitFail;
  report["verdict"] = code == kExitPass ? "pass" : "fail";
  return code;
}

int cmd_spectrum(const SpectrumArgs& a, bool slices_given, std::uint64_t seed, Json& report,
                 std::string& csv) {
  if (a.inputs.empty() || a.inputs.size() > 2) {
    throw UsageError("spectrum expects a problem file and an optional pencil file");
  }
  csv = csv_header();
  const MatrixPoly2 q = as_newton(load_problem(a.inputs[0]));

  if (!a.pair.empty()) {
    if (a.inputs.size() == 2) throw UsageError("--pair cannot be combined with a pencil file");
    if (slices_given) throw UsageError("--pair cannot be combined with --slices");
    const QtepPair pair(q, as_newton(load_problem(a.pair)));
    PairOracleOptions opts;
    opts.residual_tol = a.residual_tol;
    const SpectrumSample s = spectrum_pair_oracle(pair, opts);
    report["mode"] = "pair";
    report["bezout_bound"] = s.bezout_bound;
    if (s.status == PairSpectrumStatus::shared_factor) {
      report["status"] = "shared_factor";
      report["verdict"] = "inconclusive";
      return kExitInconclusive;
    }
    Json points = Json::array();
    for (const auto& p : s.points) {
      Json pj;
      pj["lambda"] = complex_to_json(p.lambda);
      pj["mu"] = complex_to_json(p.mu);
      pj["residual"] = p.residual;
      points.push_back(pj);
      csv += csv_row(p.lambda, p.mu, p.residual);
    }
    report["status"] = "ok";
    report["count"] = s.points.size();
    report["resultant_roots"] = s.resultant_root_count;
    const bool within = static_cast<Index>(s.points.size()) <= s.bezout_bound;
    report["count_within_bound"] = within;
    report["points"] = points;
    report["verdict"] = within ? "pass" : "fail";
    return within ? kExitPass : kExitFail;
  }

  NewtonPencil ln = [&] {
    if (a.inputs.size() == 2) return newton_view(load_pencil(a.inputs[1]), q);
    return construct_e1_newton(q, companion_params(q));
  }();
  require_compatible(q, ln);
  report["mode"] = "slices";
  report["pencil"] = a.inputs.size() == 2 ? "file" : "companion";
  const SpectrumMatchReport r =
      verify_spectrum_match(q, ln, a.slices, seed, SpectrumMatchOptions{a.match_tol, a.residual_tol});
  Json table = Json::array();
  for (const auto& s : r.slices) {
    Json sj;
    sj["mu"] = complex_to_json(s.mu);
    sj["pencil_finite"] = s.pencil_finite;
    sj["pencil_infinite"] = s.pencil_infinite;
    sj["pencil_singular"] = s.pencil_singular;
    Json ev = Json::array();
    const SliceSpectrum slice = spectrum_slice(q, s.mu, a.residual_tol);
    for (std::size_t i = 0; i < s.polynomial_eigenvalues.size(); ++i) {
      Json e;
      e["lambda"] = complex_to_json(s.polynomial_eigenvalues[i]);
      e["match_distance"] = s.match_distance[i];
      ev.push_back(e);
      csv += csv_row(s.polynomial_eigenvalues[i], s.mu, slice.residuals[i]);
    }
    sj["eigenvalues"] = ev;
    sj["contained"] = s.contained;
    table.push_back(sj);
  }
  report["slices"] = table;
  report["all_contained"] = r.all_contained;
  report["verdict"] = r.all_contained ? "pass" : "fail";
  return r.all_contained ? kExitPass : kExitFail;
}

void add_common(CLI::App* sub, Common& common) {
  sub->add_option("--seed", common.seed, "Seed for sampling (default: NEWTON2PEP_SEED or 0)");
  sub->add_option("--report", common.report_path, "Write the JSON report to this file");
  sub->add_flag("--timings", common.timings, "Include wall-clock timings in the report");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linearizations of quadratic two-parameter matrix polynomials in the Newton basis",
               "newton2pep"};
  app.require_subcommand(1);
  Common common;

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "Build a linearization of a problem file");
  construct->add_option("problem", ca.problem, "Problem file")->required();
  construct->add_flag("--companion", ca.companion, "Companion-form pencil");
  construct->add_option("--ansatz", ca.ansatz, "Right ansatz vector a,b,c");
  construct->add_option("--params", ca.params, "'seed' for random parameters or a parameter file");
  construct->add_option("--out", ca.out, "Pencil output file");
  construct->add_flag("--alt-row", ca.alt_row, "Use the alternative M for the pattern (a,0,c)");
  construct->add_option("--tol", ca.tol, "Tolerance")->check(CLI::PositiveNumber);
  construct->add_option("--samples", ca.samples, "Sample count (>= 6)")->check(CLI::Range(6, 100000));
  add_common(construct, common);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Check that a pencil linearizes a problem");
  verify->add_option("problem", va.problem, "Problem file")->required();
  verify->add_option("pencil", va.pencil, "Pencil file")->required();
  verify->add_option("--samples", va.samples, "Sample count (>= 6)")->check(CLI::Range(6, 100000));
  verify->add_option("--tol", va.tol, "Relative tolerance")->check(CLI::PositiveNumber);
  add_common(verify, common);

  TransferArgs ta;
  auto* transfer = app.add_subcommand("transfer", "Reuse monomial pencil blocks over Newton nodes");
  transfer->add_option("pencil", ta.pencil, "Monomial pencil file")->required();
  transfer->add_option("problem", ta.problem, "Newton problem file")->required();
  transfer->add_option("--out", ta.out, "Pencil output file");
  transfer->add_option("--samples", ta.samples, "Sample count (>= 6)")->check(CLI::Range(6, 100000));
  transfer->add_option("--tol", ta.tol, "Relative tolerance")->check(CLI::PositiveNumber);
  add_common(transfer, common);

  DeltaArgs da;
  auto* delta = app.add_subcommand("delta", "Operator determinants of a pair");
  delta->add_option("problems", da.problems, "Two problem files")->expected(0, 2);
  delta->add_option("--pencils", da.pencils, "Two pencil files instead of problem files")
      ->expected(2);
  delta->add_option("--params", da.params, "'companion', 'seed' or two parameter files")
      ->expected(1, 2);
  delta->add_flag("--check-singular", da.check_singular, "Exit 1 unless D0 is singular");
  delta->add_option("--singular-tol", da.singular_tol, "Singularity threshold relative to ||D0||_F")
      ->check(CLI::PositiveNumber);
  delta->add_option("--tol", da.tol, "Z-block admissibility tolerance")->check(CLI::PositiveNumber);
  add_common(delta, common);

  SpectrumArgs sa;
  auto* spectrum = app.add_subcommand("spectrum", "Slice containment or pair spectrum");
  spectrum->add_option("inputs", sa.inputs, "Problem file and optional pencil file")
      ->expected(1, 2)
      ->required();
  auto* slices_opt =
      spectrum->add_option("--slices", sa.slices, "Number of mu slices")->check(CLI::PositiveNumber);
  spectrum->add_option("--pair", sa.pair, "Second problem file for the pair spectrum");
  spectrum->add_option("--out", sa.csv, "CSV output file");
  spectrum->add_option("--match-tol", sa.match_tol, "Eigenvalue matching tolerance")
      ->check(CLI::PositiveNumber);
  spectrum->add_option("--residual-tol", sa.residual_tol, "Residual tolerance")
      ->check(CLI::PositiveNumber);
  add_common(spectrum, common);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  Json report;
  Json echo = Json::array({"newton2pep"});
  for (const auto& s : args) echo.push_back(s);
  report["command"] = echo;

  int code = kExitUsage;
  std::string csv;
  std::string csv_path;
  try {
    const std::uint64_t seed = resolve_seed(common);
    report["seed"] = seed;
    if (construct->parsed()) {
      report["tolerance"] = ca.tol;
      code = cmd_construct(ca, seed, report);
    } else if (verify->parsed()) {
      report["tolerance"] = va.tol;
      code = cmd_verify(va, seed, report);
    } else if (transfer->parsed()) {
      report["tolerance"] = ta.tol;
      code = cmd_transfer(ta, seed, report);
    } else if (delta->parsed()) {
      report["tolerance"] = da.singular_tol;
      code = cmd_delta(da, seed, report);
    } else if (spectrum->parsed()) {
      report["tolerance"] = sa.match_tol;
      code = cmd_spectrum(sa, slices_opt->count() > 0, seed, report, csv);
      csv_path = sa.csv;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const FileError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFail;
  }
  report["exit_code"] = code;
  if (common.timings) {
    const auto elapsed = std::chrono::steady_clock::now() - start;
    report["timings"] = {
        {"total_seconds", std::chrono::duration<double>(elapsed).count()}};
  }

  try {
    if (!csv_path.empty()) write_file(csv_path, csv);
    const std::string text = report.dump(2) + "\n";
    if (common.report_path.empty()) {
      out << text;
    } else {
      write_file(common.report_path, text);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return code;
}

}  // namespace newton2pep
