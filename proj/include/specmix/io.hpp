#pragma once

#include <Eigen/Dense>
#include <fstream>
#include <stdexcept>
#include <string>
#include <variant>

#include <json.hpp>

#include "specmix/complexes.hpp"

namespace specmix {

using Object = std::variant<SimplicialComplex, Hypergraph>;

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline nlohmann::json object_to_json(const SimplicialComplex& x) {
  return nlohmann::json{{"type", "simplicial"}, {"n", x.n}, {"d", x.d},
                        {"facets", x.facets}};
}

inline nlohmann::json object_to_json(const Hypergraph& h) {
  return nlohmann::json{{"type", "hypergraph"}, {"n", h.n}, {"k", h.k},
                        {"edges", h.edges}};
}

inline nlohmann::json object_to_json(const Object& o) {
  return std::visit([](const auto& v) { return object_to_json(v); }, o);
}

namespace detail {

inline int require_int(const nlohmann::json& j, const char* field) {
  if (!j.contains(field) || !j.at(field).is_number_integer())
    throw SchemaError(std::string(field) + ": missing or not an integer");
  return j.at(field).get<int>();
}

inline std::vector<std::vector<int>> require_cell_list(const nlohmann::json& j,
                                                       const char* field) {
  if (!j.contains(field) || !j.at(field).is_array())
    throw SchemaError(std::string(field) + ": missing or not an array");
  std::vector<std::vector<int>> cells;
  std::size_t idx = 0;
  for (const auto& c : j.at(field)) {
    if (!c.is_array())
      throw SchemaError(std::string(field) + "[" + std::to_string(idx) +
                        "]: not an array");
    std::vector<int> cell;
    for (const auto& v : c) {
      if (!v.is_number_integer())
        throw SchemaError(std::string(field) + "[" + std::to_string(idx) +
                          "]: non-integer vertex");
      cell.push_back(v.get<int>());
    }
    cells.push_back(std::move(cell));
    ++idx;
  }
  return cells;
}

}  // namespace detail

/// Parses and fully validates an object; violations surface as SchemaError
/// with the offending field path.
inline Object object_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("object file: top level must be an object");
  if (!j.contains("type") || !j.at("type").is_string())
    throw SchemaError("type: missing or not a string");
  const std::string type = j.at("type").get<std::string>();
  try {
    if (type == "simplicial") {
      SimplicialComplex x;
      x.n = detail::require_int(j, "n");
      x.d = detail::require_int(j, "d");
      x.facets = detail::require_cell_list(j, "facets");
      validate(x);
      return x;
    }
    if (type == "hypergraph") {
      Hypergraph h;
      h.n = detail::require_int(j, "n");
      h.k = detail::require_int(j, "k");
      h.edges = detail::require_cell_list(j, "edges");
      validate(h);
      return h;
    }
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
  throw SchemaError("type: expected \"simplicial\" or \"hypergraph\", got \"" +
                    type + "\"");
}

inline Object read_object(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path + ": cannot open");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
  return object_from_json(j);
}

inline void write_json_file(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw SchemaError(path + ": cannot open for writing");
  out << j.dump(2) << "\n";
}

inline void write_object(const Object& o, const std::string& path) {
  write_json_file(object_to_json(o), path);
}

/// Dump of a square operator as CSV with canonical-cell headers (cells as
/// dash-joined ascending vertices), for debugging and golden tests.
inline std::string operator_to_csv(const Eigen::MatrixXd& m, int n, int cell_size) {
  const auto cells = all_subsets(n, cell_size);
  auto cell_name = [](const std::vector<int>& c) {
    std::string s;
    for (int v : c) s += (s.empty() ? "" : "-") + std::to_string(v);
    return s.empty() ? std::string("()") : s;
  };
  std::string out = "cell";
  for (const auto& c : cells) out += "," + cell_name(c);
  out += "\n";
  char buf[64];
  for (std::size_t i = 0; i < cells.size() && i < static_cast<std::size_t>(m.rows()); ++i) {
    out += cell_name(cells[i]);
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.12g", m(static_cast<Eigen::Index>(i), j));
      out += ",";
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace specmix
