#include "evo/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace evo {

namespace {

EvolutionAlgebra parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidParams(std::string("malformed JSON: ") + e.what());
  }
  // A bare array of rows is accepted as well; its length gives the dimension.
  if (doc.is_array()) doc = nlohmann::json{{"dim", doc.size()}, {"matrix", doc}};
  if (!doc.is_object() || !doc.contains("dim") || !doc.contains("matrix")) {
    throw InvalidParams("JSON input must be an object with \"dim\" and \"matrix\", or an array of rows");
  }
  if (!doc["dim"].is_number_integer()) throw InvalidParams("\"dim\" must be an integer");
  const int dim = doc["dim"].get<int>();
  const auto& rows = doc["matrix"];
  if (dim != 2 && dim != 3) throw DimensionError("dimension must be 2 or 3");
  if (!rows.is_array() || static_cast<int>(rows.size()) != dim) throw DimensionError("matrix must have dim rows");
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != dim) {
      throw DimensionError("matrix row " + std::to_string(i) + " must have dim entries");
    }
    for (int k = 0; k < dim; ++k) {
      if (!rows[i][k].is_number()) throw InvalidParams("matrix entries must be numbers");
      m(i, k) = rows[i][k].get<double>();
    }
  }
  return EvolutionAlgebra(dim, m);
}

EvolutionAlgebra parse_plain(std::string_view text) {
  std::istringstream in{std::string(text)};
  int dim = 0;
  if (!(in >> dim)) throw InvalidParams("plain-text input must start with the dimension");
  if (dim != 2 && dim != 3) throw DimensionError("dimension must be 2 or 3");
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int k = 0; k < dim; ++k) {
      std::string token;
      if (!(in >> token)) throw DimensionError("plain-text matrix is missing entries");
      try {
        std::size_t used = 0;
        m(i, k) = std::stod(token, &used);
        if (used != token.size()) throw InvalidParams("bad number: " + token);
      } catch (const std::logic_error&) {
        throw InvalidParams("bad number: " + token);
      }
    }
  }
  std::string extra;
  if (in >> extra) throw DimensionError("plain-text matrix has trailing entries");
  return EvolutionAlgebra(dim, m);
}

}  // namespace

EvolutionAlgebra parse_algebra(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) throw InvalidParams("empty matrix input");
  return text[first] == '{' || text[first] == '[' ? parse_json(text) : parse_plain(text);
}

EvolutionAlgebra load_algebra(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParams("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_algebra(buf.str());
}

std::string format_algebra_json(const EvolutionAlgebra& a) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < a.dim(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < a.dim(); ++k) row.push_back(a(i, k));
    rows.push_back(row);
  }
  return nlohmann::json{{"dim", a.dim()}, {"matrix", rows}}.dump();
}

std::string format_algebra_text(const EvolutionAlgebra& a) {
  std::ostringstream out;
  out.precision(17);
  out << a.dim() << '\n';
  for (int i = 0; i < a.dim(); ++i) {
    for (int k = 0; k < a.dim(); ++k) out << (k ? " " : "") << a(i, k);
    out << '\n';
  }
  return out.str();
}

}  // namespace evo
