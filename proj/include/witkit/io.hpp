// io.hpp — The operator file format and deterministic JSON emission. Files
// carry one operator, state or vector each; parsing validates the target
// type's invariants and never yields a partial object.

#pragma once

#include "witkit/core.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace witkit::io {

// Raised for unreadable files, malformed JSON (with line/column), and
// well-formed files whose content fails a field or type invariant (with the
// offending field named).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OperatorKind { hermitian, density, pure_vector };

std::string kind_name(OperatorKind kind);

// One parsed file: dims, kind, the validated payload, and free-form meta
// strings. Payload values are stored exactly as validated, so serializing a
// parsed file reproduces it byte for byte.
class OperatorFile {
 public:
  static OperatorFile from_hermitian(const HermitianOperator& op,
                                     std::map<std::string, std::string> meta = {});
  static OperatorFile from_density(const DensityMatrix& rho,
                                   std::map<std::string, std::string> meta = {});
  static OperatorFile from_pure(const PureVector& psi,
                                std::map<std::string, std::string> meta = {});

  OperatorKind kind() const { return kind_; }
  const BipartiteDims& dims() const { return dims_; }
  const std::map<std::string, std::string>& meta() const { return meta_; }

  // Typed promotions. A density file is a valid Hermitian operator; a pure
  // vector file is a valid density (as its projector). Anything else throws.
  HermitianOperator as_hermitian() const;
  DensityMatrix as_density() const;
  PureVector as_pure() const;

 private:
  OperatorFile(BipartiteDims dims, OperatorKind kind) : dims_(dims), kind_(kind) {}

  BipartiteDims dims_;
  OperatorKind kind_;
  Matrix matrix_;  // hermitian / density payload
  Vector vector_;  // pure_vector payload
  std::map<std::string, std::string> meta_;

  friend OperatorFile parse_operator(const std::string& text);
  friend std::string serialize(const OperatorFile& file);
};

OperatorFile parse_operator(const std::string& text);
OperatorFile load_operator(const std::string& path);
std::string serialize(const OperatorFile& file);
void save_operator(const OperatorFile& file, const std::string& path);

std::string read_file(const std::string& path);                      // throws ParseError
void write_file(const std::string& path, const std::string& bytes);  // throws ParseError

// 17 significant digits, enough for binary64 values to survive a round trip.
std::string format_double(double x);

// FNV-1a 64-bit digest as 16 lowercase hex characters; used to pin report
// inputs to exact file bytes.
std::string hex_digest(const std::string& bytes);

// Ordered JSON tree for deterministic emission: object keys keep insertion
// order, reals render via format_double, and arrays nesting no deeper than
// pairs-of-scalars stay on one line. Both the file format and CLI reports
// are emitted through this, so identical values give identical bytes.
class JsonNode {
 public:
  JsonNode() : kind_(Kind::null) {}
  JsonNode(bool b) : kind_(Kind::boolean), bool_(b) {}
  JsonNode(int i) : kind_(Kind::integer), int_(i) {}
  JsonNode(long long i) : kind_(Kind::integer), int_(i) {}
  JsonNode(double x) : kind_(Kind::real), real_(x) {}
  JsonNode(std::string s) : kind_(Kind::text), text_(std::move(s)) {}
  JsonNode(const char* s) : kind_(Kind::text), text_(s) {}

  static JsonNode object();
  static JsonNode array();
  static JsonNode complex_pair(Cplx z);  // [re, im]

  JsonNode& push(JsonNode v);                  // array append
  JsonNode& set(std::string key, JsonNode v);  // object append, keys unique by construction

  std::string dump() const;  // two-space indent, trailing newline

 private:
  enum class Kind { null, boolean, integer, real, text, array, object };

  int depth() const;
  void emit(std::string& out, int indent) const;

  Kind kind_;
  bool bool_ = false;
  long long int_ = 0;
  double real_ = 0.0;
  std::string text_;
  std::vector<JsonNode> items_;
  std::vector<std::pair<std::string, JsonNode>> fields_;
};

}  // namespace witkit::io
