#include "newton2pep/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace newton2pep {

namespace {

[[noreturn]] void field_error(const std::string& source, const std::string& field,
                              const std::string& message) {
  throw FileError(source + ": field '" + field + "': " + message);
}

const Json& require(const Json& j, const char* key, const std::string& source,
                    const std::string& path) {
  if (!j.is_object()) field_error(source, path.empty() ? "<root>" : path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) field_error(source, path.empty() ? key : path + "." + key, "missing");
  return *it;
}

Complex complex_from_json(const Json& j, const std::string& source, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    field_error(source, field, "expected a [re, im] pair of numbers");
  }
  const Complex z{j[0].get<double>(), j[1].get<double>()};
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    field_error(source, field, "entry is not finite");
  }
  return z;
}

ComplexMatrix matrix_from_json(const Json& j, Index rows, Index cols, const std::string& source,
                               const std::string& field) {
  if (!j.is_array()) field_error(source, field, "expected an array of [re, im] pairs");
  if (static_cast<Index>(j.size()) != rows * cols) {
    field_error(source, field,
                "expected " + std::to_string(rows * cols) + " entries, found " +
                    std::to_string(j.size()));
  }
  ComplexMatrix a(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      const Index k = r * cols + c;
      a(r, c) = complex_from_json(j[k], source, field + "[" + std::to_string(k) + "]");
    }
  }
  return a;
}

Index read_n(const Json& j, const std::string& source) {
  const Json& n = require(j, "n", source, "");
  if (!n.is_number_integer() || n.get<long long>() < 1) {
    field_error(source, "n", "expected a positive integer");
  }
  return static_cast<Index>(n.get<long long>());
}

Basis read_basis(const Json& j, const std::string& source) {
  const Json& b = require(j, "basis", source, "");
  if (b == "monomial") return Basis::monomial;
  if (b == "newton") return Basis::newton;
  field_error(source, "basis", "expected \"monomial\" or \"newton\"");
}

NewtonNodes read_nodes(const Json& j, Basis basis, const std::string& source) {
  const bool present = j.contains("nodes");
  if (basis == Basis::monomial) {
    if (present) field_error(source, "nodes", "must be absent when basis is \"monomial\"");
    return {};
  }
  if (!present) field_error(source, "nodes", "required when basis is \"newton\"");
  const Json& nodes = j["nodes"];
  NewtonNodes out;
  for (const char* key : {"alpha", "beta"}) {
    const Json& pair = require(nodes, key, source, "nodes");
    const std::string field = std::string("nodes.") + key;
    if (!pair.is_array() || pair.size() != 2) field_error(source, field, "expected two nodes");
    const Complex first = complex_from_json(pair[0], source, field + "[0]");
    const Complex second = complex_from_json(pair[1], source, field + "[1]");
    if (std::string(key) == "alpha") {
      out.alpha1 = first;
      out.alpha2 = second;
    } else {
      out.beta1 = first;
      out.beta2 = second;
    }
  }
  return out;
}

void write_header(Json& j, Index n, Basis basis, const NewtonNodes& nodes) {
  j["n"] = n;
  j["basis"] = basis == Basis::newton ? "newton" : "monomial";
  if (basis == Basis::newton) j["nodes"] = nodes_to_json(nodes);
}

}  // namespace

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json matrix_to_json(const ComplexMatrix& a) {
  Json out = Json::array();
  for (Index r = 0; r < a.rows(); ++r) {
    for (Index c = 0; c < a.cols(); ++c) out.push_back(complex_to_json(a(r, c)));
  }
  return out;
}

Json nodes_to_json(const NewtonNodes& nodes) {
  Json j;
  j["alpha"] = Json::array({complex_to_json(nodes.alpha1), complex_to_json(nodes.alpha2)});
  j["beta"] = Json::array({complex_to_json(nodes.beta1), complex_to_json(nodes.beta2)});
  return j;
}

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t stop = std::min(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw FileError(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                    ": invalid JSON");
  }
}

MatrixPoly2 problem_from_json(const Json& j, const std::string& source) {
  const Index n = read_n(j, source);
  const Basis basis = read_basis(j, source);
  const NewtonNodes nodes = read_nodes(j, basis, source);
  const Json& coeffs = require(j, "coefficients", source, "");
  CoeffArray blocks;
  for (int k = 0; k < 6; ++k) {
    const std::string name(kCoeffNames[k]);
    blocks[k] = matrix_from_json(require(coeffs, name.c_str(), source, "coefficients"), n, n,
                                 source, "coefficients." + name);
  }
  return basis == Basis::newton ? MatrixPoly2::newton(std::move(blocks), nodes)
                                : MatrixPoly2::monomial(std::move(blocks));
}

Json problem_to_json(const MatrixPoly2& q) {
  Json j;
  write_header(j, q.size(), q.basis(), q.nodes());
  Json coeffs;
  for (int k = 0; k < 6; ++k) coeffs[std::string(kCoeffNames[k])] = matrix_to_json(q.coeffs()[k]);
  j["coefficients"] = std::move(coeffs);
  return j;
}

MatrixPoly2 load_problem(const std::filesystem::path& path) {
  const std::string source = path.string();
  return problem_from_json(parse_json(read_text(path), source), source);
}

Index PencilFile::block_size() const {
  return std::visit([](const auto& p) { return p.block_size(); }, pencil);
}

Basis PencilFile::basis() const {
  return std::holds_alternative<NewtonPencil>(pencil) ? Basis::newton : Basis::monomial;
}

PencilFile pencil_from_json(const Json& j, const std::string& source) {
  const Index n = read_n(j, source);
  const Basis basis = read_basis(j, source);
  const NewtonNodes nodes = read_nodes(j, basis, source);
  const Json& kind = require(j, "kind", source, "");
  if (kind != "pencil") field_error(source, "kind", "expected \"pencil\"");
  const Json& blocks = require(j, "blocks", source, "");
  const Index k = 3 * n;
  const auto block = [&](const char* name) {
    return matrix_from_json(require(blocks, name, source, "blocks"), k, k, source,
                            std::string("blocks.") + name);
  };

  PencilFile out{basis == Basis::newton
                     ? std::variant<MonomialPencil, NewtonPencil>(
                           NewtonPencil(block("A1"), block("A2"), block("A3"), nodes))
                     : std::variant<MonomialPencil, NewtonPencil>(
                           MonomialPencil(block("L1"), block("L2"), block("L0"))),
                 std::nullopt};

  if (j.contains("provenance")) {
    const Json& p = j["provenance"];
    PencilProvenance prov;
    const Json& construction = require(p, "construction", source, "provenance");
    if (!construction.is_string()) {
      field_error(source, "provenance.construction", "expected a string");
    }
    prov.construction = construction.get<std::string>();
    if (p.contains("ansatz")) {
      const Json& a = p["ansatz"];
      if (!a.is_array() || a.size() != 3) field_error(source, "provenance.ansatz", "expected 3 entries");
      Eigen::Vector3cd v;
      for (int i = 0; i < 3; ++i) {
        v(i) = complex_from_json(a[i], source, "provenance.ansatz[" + std::to_string(i) + "]");
      }
      prov.ansatz = v;
    }
    if (p.contains("M")) {
      prov.m = Eigen::Matrix3cd(matrix_from_json(p["M"], 3, 3, source, "provenance.M"));
    }
    if (p.contains("params")) prov.params = params_from_json(p["params"], n, source + " (provenance)");
    out.provenance = std::move(prov);
  }
  return out;
}

Json pencil_to_json(const PencilFile& file) {
  Json j;
  Json blocks;
  if (const auto* np = std::get_if<NewtonPencil>(&file.pencil)) {
    write_header(j, np->block_size(), Basis::newton, np->nodes());
    blocks["A1"] = matrix_to_json(np->a1());
    blocks["A2"] = matrix_to_json(np->a2());
    blocks["A3"] = matrix_to_json(np->a3());
  } else {
    const auto& mp = std::get<MonomialPencil>(file.pencil);
    write_header(j, mp.block_size(), Basis::monomial, {});
    blocks["L1"] = matrix_to_json(mp.l1());
    blocks["L2"] = matrix_to_json(mp.l2());
    blocks["L0"] = matrix_to_json(mp.l0());
  }
  j["kind"] = "pencil";
  j["blocks"] = std::move(blocks);
  if (file.provenance) {
    const PencilProvenance& p = *file.provenance;
    Json prov;
    prov["construction"] = p.construction;
    if (p.ansatz) {
      Json a = Json::array();
      for (int i = 0; i < 3; ++i) a.push_back(complex_to_json((*p.ansatz)(i)));
      prov["ansatz"] = std::move(a);
    }
    if (p.m) prov["M"] = matrix_to_json(*p.m);
    if (p.params) prov["params"] = params_to_json(*p.params);
    j["provenance"] = std::move(prov);
  }
  return j;
}

PencilFile load_pencil(const std::filesystem::path& path) {
  const std::string source = path.string();
  return pencil_from_json(parse_json(read_text(path), source), source);
}

E1FreeParams params_from_json(const Json& j, Index n, const std::string& source) {
  E1FreeParams p;
  p.y11 = matrix_from_json(require(j, "Y11", source, ""), n, n, source, "Y11");
  p.z1 = matrix_from_json(require(j, "Z1", source, ""), 3 * n, n, source, "Z1");
  p.z2 = matrix_from_json(require(j, "Z2", source, ""), 3 * n, n, source, "Z2");
  return p;
}

Json params_to_json(const E1FreeParams& params) {
  Json j;
  j["Y11"] = matrix_to_json(params.y11);
  j["Z1"] = matrix_to_json(params.z1);
  j["Z2"] = matrix_to_json(params.z2);
  return j;
}

E1FreeParams load_params(const std::filesystem::path& path, Index n) {
  const std::string source = path.string();
  return params_from_json(parse_json(read_text(path), source), n, source);
}

}  // namespace newton2pep
