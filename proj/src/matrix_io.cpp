#include "kreinkit/matrix_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "kreinkit/error.hpp"

namespace kreinkit {

namespace {

using nlohmann::json;

json parse_document(const std::string& text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    throw ParseError("matrix document is not valid JSON");
  }
  if (!doc.is_object()) {
    throw ParseError("matrix document must be a JSON object");
  }
  return doc;
}

std::size_t positive_dim(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_integer()) {
    throw ParseError(std::string("matrix document needs an integer '") + key +
                     "' field");
  }
  const std::int64_t v = doc[key].get<std::int64_t>();
  if (v < 1) {
    throw ParseError(std::string("matrix '") + key +
                     "' must be positive, got " + std::to_string(v));
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

ComplexMatrix matrix_from_json_text(const std::string& text) {
  const json doc = parse_document(text);
  const std::size_t rows = positive_dim(doc, "rows");
  const std::size_t cols = positive_dim(doc, "cols");

  if (!doc.contains("entries") || !doc["entries"].is_array()) {
    throw ParseError("matrix document needs an 'entries' array");
  }
  const json& entries = doc["entries"];
  if (entries.size() != rows * cols) {
    std::ostringstream os;
    os << "matrix 'entries' holds " << entries.size() << " pairs, expected "
       << rows << " x " << cols << " = " << rows * cols;
    throw ParseError(os.str());
  }

  ComplexMatrix m(rows, cols);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const json& pair = entries[k];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
        !pair[1].is_number()) {
      throw ParseError("matrix entry " + std::to_string(k) +
                       " is not a [re, im] number pair");
    }
    m(k / cols, k % cols) =
        Complex(pair[0].get<double>(), pair[1].get<double>());
  }
  return m;
}

std::string matrix_to_json_text(const ComplexMatrix& m,
                                const std::string& role) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw ParseError("matrix files require at least one row and column");
  }
  json doc;
  doc["rows"] = m.rows();
  doc["cols"] = m.cols();
  json entries = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      entries.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    }
  }
  doc["entries"] = std::move(entries);
  if (!role.empty()) doc["role"] = role;
  return doc.dump(2) + "\n";
}

ComplexMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open matrix file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return matrix_from_json_text(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void save_matrix(const std::string& path, const ComplexMatrix& m,
                 const std::string& role) {
  const std::string text = matrix_to_json_text(m, role);
  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot write matrix file '" + path + "'");
  }
  out << text;
}

std::string matrix_role_from_json_text(const std::string& text) {
  const json doc = parse_document(text);
  if (!doc.contains("role")) return "";
  if (!doc["role"].is_string()) {
    throw ParseError("matrix 'role' must be a string");
  }
  return doc["role"].get<std::string>();
}

}  // namespace kreinkit
