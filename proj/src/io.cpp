// io.cpp — file parsing with located errors, deterministic serialization.

#include "witkit/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

namespace witkit::io {
namespace {

using nlohmann::json;

std::string locate(const std::string& text, std::size_t byte) {
  std::size_t pos = std::min(byte > 0 ? byte - 1 : 0, text.size());
  int line = 1;
  int column = 1;
  for (std::size_t i = 0; i < pos; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

Cplx read_complex(const json& entry, const std::string& path) {
  if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number())
    throw ParseError(path + ": expected a [re, im] pair of numbers");
  return {entry[0].get<double>(), entry[1].get<double>()};
}

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  out += '"';
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

}  // namespace

std::string kind_name(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::hermitian: return "hermitian";
    case OperatorKind::density: return "density";
    case OperatorKind::pure_vector: return "pure_vector";
  }
  return "hermitian";
}

OperatorFile OperatorFile::from_hermitian(const HermitianOperator& op,
                                          std::map<std::string, std::string> meta) {
  OperatorFile file(op.dims(), OperatorKind::hermitian);
  file.matrix_ = op.matrix();
  file.meta_ = std::move(meta);
  return file;
}

OperatorFile OperatorFile::from_density(const DensityMatrix& rho,
                                        std::map<std::string, std::string> meta) {
  OperatorFile file(rho.dims(), OperatorKind::density);
  file.matrix_ = rho.matrix();
  file.meta_ = std::move(meta);
  return file;
}

OperatorFile OperatorFile::from_pure(const PureVector& psi,
                                     std::map<std::string, std::string> meta) {
  OperatorFile file(psi.dims(), OperatorKind::pure_vector);
  file.vector_ = psi.amps();
  file.meta_ = std::move(meta);
  return file;
}

HermitianOperator OperatorFile::as_hermitian() const {
  if (kind_ == OperatorKind::pure_vector)
    throw ParseError("a pure_vector file cannot be used as a Hermitian operator");
  return {dims_, matrix_};
}

DensityMatrix OperatorFile::as_density() const {
  switch (kind_) {
    case OperatorKind::density: return DensityMatrix(HermitianOperator(dims_, matrix_));
    case OperatorKind::pure_vector: return DensityMatrix::from_pure(PureVector(dims_, vector_));
    case OperatorKind::hermitian: break;
  }
  throw ParseError("kind 'hermitian' is not a state; expected density or pure_vector");
}

PureVector OperatorFile::as_pure() const {
  if (kind_ != OperatorKind::pure_vector)
    throw ParseError("kind '" + kind_name(kind_) + "' is not a pure vector");
  return {dims_, vector_};
}

OperatorFile parse_operator(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("JSON syntax error at " + locate(text, e.byte));
  }

  if (!root.is_object()) throw ParseError("top level: expected an object");
  for (const auto& item : root.items()) {
    const std::string& key = item.key();
    if (key != "dims" && key != "kind" && key != "data" && key != "meta")
      throw ParseError("unknown field '" + key + "'");
  }
  for (const char* required : {"dims", "kind", "data"}) {
    if (!root.contains(required))
      throw ParseError("missing field '" + std::string(required) + "'");
  }

  const json& jdims = root["dims"];
  if (!jdims.is_array() || jdims.size() != 2 || !jdims[0].is_number_integer() ||
      !jdims[1].is_number_integer())
    throw ParseError("dims: expected [d1, d2] with integer factors");

  const json& jkind = root["kind"];
  if (!jkind.is_string())
    throw ParseError("kind: expected one of hermitian, density, pure_vector");
  const std::string kind_text = jkind.get<std::string>();
  OperatorKind kind;
  if (kind_text == "hermitian")
    kind = OperatorKind::hermitian;
  else if (kind_text == "density")
    kind = OperatorKind::density;
  else if (kind_text == "pure_vector")
    kind = OperatorKind::pure_vector;
  else
    throw ParseError("kind: '" + kind_text + "' is not one of hermitian, density, pure_vector");

  try {
    const BipartiteDims dims(jdims[0].get<int>(), jdims[1].get<int>());
    const int d = dims.total();
    const json& jdata = root["data"];

    OperatorFile file(dims, kind);
    if (kind == OperatorKind::pure_vector) {
      if (!jdata.is_array() || static_cast<int>(jdata.size()) != d)
        throw ParseError("data: expected " + std::to_string(d) + " [re, im] entries");
      Vector v(d);
      for (int i = 0; i < d; ++i) v[i] = read_complex(jdata[i], "data[" + std::to_string(i) + "]");
      file.vector_ = PureVector(dims, std::move(v)).amps();
    } else {
      if (!jdata.is_array() || static_cast<int>(jdata.size()) != d)
        throw ParseError("data: expected " + std::to_string(d) + " rows, found " +
                         std::to_string(jdata.size()));
      Matrix m(d, d);
      for (int i = 0; i < d; ++i) {
        const json& row = jdata[i];
        if (!row.is_array() || static_cast<int>(row.size()) != d)
          throw ParseError("data[" + std::to_string(i) + "]: expected " + std::to_string(d) +
                           " [re, im] entries");
        for (int j = 0; j < d; ++j)
          m(i, j) = read_complex(row[j], "data[" + std::to_string(i) + "][" + std::to_string(j) + "]");
      }
      if (kind == OperatorKind::hermitian) {
        file.matrix_ = HermitianOperator(dims, std::move(m)).matrix();
      } else {
        file.matrix_ = DensityMatrix(HermitianOperator(dims, std::move(m))).matrix();
      }
    }

    if (root.contains("meta")) {
      const json& jmeta = root["meta"];
      if (!jmeta.is_object()) throw ParseError("meta: expected an object of strings");
      for (const auto& item : jmeta.items()) {
        if (!item.value().is_string())
          throw ParseError("meta." + item.key() + ": expected a string");
        file.meta_[item.key()] = item.value().get<std::string>();
      }
    }
    return file;
  } catch (const std::invalid_argument& e) {
    throw ParseError("data: " + std::string(e.what()));
  }
}

OperatorFile load_operator(const std::string& path) {
  try {
    return parse_operator(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string serialize(const OperatorFile& file) {
  JsonNode root = JsonNode::object();
  root.set("dims", JsonNode::array().push(file.dims_.d1).push(file.dims_.d2));
  root.set("kind", kind_name(file.kind_));

  JsonNode data = JsonNode::array();
  if (file.kind_ == OperatorKind::pure_vector) {
    for (int i = 0; i < file.vector_.size(); ++i)
      data.push(JsonNode::complex_pair(file.vector_[i]));
  } else {
    for (int i = 0; i < file.matrix_.rows(); ++i) {
      JsonNode row = JsonNode::array();
      for (int j = 0; j < file.matrix_.cols(); ++j)
        row.push(JsonNode::complex_pair(file.matrix_(i, j)));
      data.push(std::move(row));
    }
  }
  root.set("data", std::move(data));

  if (!file.meta_.empty()) {
    JsonNode meta = JsonNode::object();
    for (const auto& [key, value] : file.meta_) meta.set(key, value);
    root.set("meta", std::move(meta));
  }
  return root.dump();
}

void save_operator(const OperatorFile& file, const std::string& path) {
  write_file(path, serialize(file));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (!in.good() && !in.eof()) throw ParseError("cannot read file: " + path);
  return buffer.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("cannot write file: " + path);
  out << bytes;
  out.flush();
  if (!out.good()) throw ParseError("cannot write file: " + path);
}

std::string format_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("format_double: value is not finite");
  if (x == 0.0) return "0";  // canonical zero: "-0" parses back as integer 0, losing the sign
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, result.ptr);
}

std::string hex_digest(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

JsonNode JsonNode::object() {
  JsonNode node;
  node.kind_ = Kind::object;
  return node;
}

JsonNode JsonNode::array() {
  JsonNode node;
  node.kind_ = Kind::array;
  return node;
}

JsonNode JsonNode::complex_pair(Cplx z) {
  return array().push(z.real()).push(z.imag());
}

JsonNode& JsonNode::push(JsonNode v) {
  items_.push_back(std::move(v));
  return *this;
}

JsonNode& JsonNode::set(std::string key, JsonNode v) {
  fields_.emplace_back(std::move(key), std::move(v));
  return *this;
}

int JsonNode::depth() const {
  int deepest = 0;
  if (kind_ == Kind::array) {
    for (const auto& item : items_) deepest = std::max(deepest, item.depth());
    return 1 + deepest;
  }
  if (kind_ == Kind::object) {
    for (const auto& [key, value] : fields_) deepest = std::max(deepest, value.depth());
    return 1 + deepest;
  }
  return 0;
}

void JsonNode::emit(std::string& out, int indent) const {
  switch (kind_) {
    case Kind::null: out += "null"; return;
    case Kind::boolean: out += bool_ ? "true" : "false"; return;
    case Kind::integer: out += std::to_string(int_); return;
    case Kind::real: out += format_double(real_); return;
    case Kind::text: out += escape(text_); return;
    case Kind::array: {
      if (items_.empty()) {
        out += "[]";
        return;
      }
      bool has_object = false;
      for (const auto& item : items_)
        if (item.kind_ == Kind::object) has_object = true;
      if (depth() <= 2 && !has_object) {
        out += '[';
        for (std::size_t i = 0; i < items_.size(); ++i) {
          if (i > 0) out += ", ";
          items_[i].emit(out, indent);
        }
        out += ']';
        return;
      }
      out += "[\n";
      const std::string pad(static_cast<std::size_t>(indent) + 2, ' ');
      for (std::size_t i = 0; i < items_.size(); ++i) {
        out += pad;
        items_[i].emit(out, indent + 2);
        if (i + 1 < items_.size()) out += ',';
        out += '\n';
      }
      out += std::string(static_cast<std::size_t>(indent), ' ');
      out += ']';
      return;
    }
    case Kind::object: {
      if (fields_.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      const std::string pad(static_cast<std::size_t>(indent) + 2, ' ');
      for (std::size_t i = 0; i < fields_.size(); ++i) {
        out += pad;
        out += escape(fields_[i].first);
        out += ": ";
        fields_[i].second.emit(out, indent + 2);
        if (i + 1 < fields_.size()) out += ',';
        out += '\n';
      }
      out += std::string(static_cast<std::size_t>(indent), ' ');
      out += '}';
      return;
    }
  }
}

std::string JsonNode::dump() const {
  std::string out;
  emit(out, 0);
  out += '\n';
  return out;
}

}  // namespace witkit::io
