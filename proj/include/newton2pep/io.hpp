#pragma once

#include "newton2pep/linearize.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include <json.hpp>

namespace newton2pep {

using Json = nlohmann::ordered_json;

/// Malformed input. `what()` names the source and either the line and column
/// of a syntax error or the offending field path.
class FileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads a whole file; throws FileError when it cannot be opened.
std::string read_text(const std::filesystem::path& path);

Json complex_to_json(Complex z);
/// Row-major flat array of [re, im] pairs.
Json matrix_to_json(const ComplexMatrix& a);
Json nodes_to_json(const NewtonNodes& nodes);

/// Parses JSON text, turning syntax errors into FileError with line:column.
Json parse_json(const std::string& text, const std::string& source);

MatrixPoly2 problem_from_json(const Json& j, const std::string& source);
Json problem_to_json(const MatrixPoly2& q);
MatrixPoly2 load_problem(const std::filesystem::path& path);

struct PencilProvenance {
  std::string construction;  // "companion", "ansatz" or "transfer"
  std::optional<Eigen::Vector3cd> ansatz;
  std::optional<Eigen::Matrix3cd> m;
  /// e1-form parameters of (M (x) I_n) L, or of L itself when M is absent.
  std::optional<E1FreeParams> params;
};

struct PencilFile {
  std::variant<MonomialPencil, NewtonPencil> pencil;
  std::optional<PencilProvenance> provenance;

  Index block_size() const;
  Basis basis() const;
};

PencilFile pencil_from_json(const Json& j, const std::string& source);
Json pencil_to_json(const PencilFile& file);
PencilFile load_pencil(const std::filesystem::path& path);

/// {"Y11", "Z1", "Z2"} with n x n, 3n x n and 3n x n row-major blocks.
E1FreeParams params_from_json(const Json& j, Index n, const std::string& source);
Json params_to_json(const E1FreeParams& params);
E1FreeParams load_params(const std::filesystem::path& path, Index n);

}  // namespace newton2pep
