#pragma once

// Matrix files, report serialization and flat key=value configuration.
//
// A matrix file is JSON: {"rows": r, "cols": c, "data": [[re, im], ...]} in
// row-major order. Doubles are written in shortest round-trip form, so a
// write/read cycle is bit-identical.

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "acm/canonical.hpp"
#include "acm/invariants.hpp"
#include "acm/models.hpp"
#include "acm/relations.hpp"
#include "acm/wannier.hpp"

namespace acm::io {

using nlohmann::json;
namespace fs = std::filesystem;

inline json matrix_to_json(const ComplexMatrix& M) {
  json data = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) data.push_back({M(i, j).real(), M(i, j).imag()});
  return {{"rows", M.rows()}, {"cols", M.cols()}, {"data", std::move(data)}};
}

inline ComplexMatrix matrix_from_json(const json& j) {
  try {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const json& data = j.at("data");
    if (rows < 0 || cols < 0 || !data.is_array() ||
        data.size() != static_cast<std::size_t>(rows * cols))
      throw Error(Errc::ParseError, "matrix: data length does not match rows*cols");
    ComplexMatrix M(rows, cols);
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index jj = 0; jj < cols; ++jj, ++k) {
        const json& e = data[k];
        if (!e.is_array() || e.size() != 2)
          throw Error(Errc::ParseError, "matrix: entries must be [re, im] pairs");
        M(i, jj) = cplx(e[0].get<double>(), e[1].get<double>());
      }
    return M;
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, std::string("matrix: ") + e.what());
  }
}

inline void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw Error(Errc::InvalidArgument, "cannot open '" + path.string() + "' for writing");
  f << text;
}

inline std::string read_text(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw Error(Errc::InvalidArgument, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline void write_matrix(const fs::path& path, const ComplexMatrix& M) {
  write_text(path, matrix_to_json(M).dump() + "\n");
}

inline ComplexMatrix read_matrix(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw Error(Errc::ParseError, path.string() + ": " + e.what());
  }
  return matrix_from_json(j);
}

/// Role-named matrix in a directory: <dir>/<role>.json.
inline fs::path role_path(const fs::path& dir, std::string_view role) {
  return dir / (std::string(role) + ".json");
}

inline bool has_role(const fs::path& dir, std::string_view role) {
  return fs::exists(role_path(dir, role));
}

inline ComplexMatrix read_role(const fs::path& dir, std::string_view role) {
  return read_matrix(role_path(dir, role));
}

inline void write_role(const fs::path& dir, std::string_view role, const ComplexMatrix& M) {
  write_matrix(role_path(dir, role), M);
}

namespace detail {

inline json finite_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

}  // namespace detail

inline json to_json(const IndexReport& r) {
  json j{{"value", r.value},
         {"gap", detail::finite_or_null(r.gap)},
         {"input_residual", detail::finite_or_null(r.input_residual)},
         {"class", std::string(to_string(r.cls))},
         {"seconds", r.seconds}};
  if (std::isfinite(r.lifted_residual)) j["lifted_residual"] = r.lifted_residual;
  if (std::isfinite(r.projection_delta)) j["projection_delta"] = r.projection_delta;
  if (r.rank >= 0) j["rank"] = r.rank;
  return j;
}

inline json to_json(const RelationReport& r) {
  json terms = json::object();
  for (const auto& [label, value] : r.per_term) terms[label] = value;
  return {{"relation", std::string(to_string(r.relation))},
          {"delta", r.delta},
          {"worst_term", r.worst_term},
          {"terms", std::move(terms)}};
}

inline json to_json(const WitnessReport& r, const std::string& witness_ref) {
  return {{"bound", r.bound},
          {"norm_condition", r.norm_condition},
          {"certified", r.certified},
          {"witness", witness_ref}};
}

/// CSV rows basis_index,sigma2,running_total,running_max.
inline std::string spread_csv(const SpreadReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << "basis_index,sigma2,running_total,running_max\n";
  double total = 0.0, maximum = 0.0;
  for (Eigen::Index j = 0; j < r.per_vector.size(); ++j) {
    total += r.per_vector(j);
    maximum = j == 0 ? r.per_vector(j) : std::max(maximum, r.per_vector(j));
    out << j << ',' << r.per_vector(j) << ',' << total << ',' << maximum << '\n';
  }
  return out.str();
}

/// Flat configuration: one `key = value` per line, `#` starts a comment.
using Config = std::map<std::string, std::string>;

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline Config parse_config(const std::string& text) {
  Config out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw Error(Errc::ParseError, "config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    if (key.empty()) throw Error(Errc::ParseError, "config line " + std::to_string(lineno) + ": empty key");
    out[key] = trim(std::string_view(t).substr(eq + 1));
  }
  return out;
}

inline Config read_config(const fs::path& path) { return parse_config(read_text(path)); }

/// Real number, or a fraction "p/q".
inline double parse_number(const std::string& s) {
  const std::string t = trim(s);
  try {
    std::size_t used = 0;
    if (auto slash = t.find('/'); slash != std::string::npos) {
      const double p = std::stod(t.substr(0, slash), &used);
      if (used != slash) throw std::invalid_argument(t);
      const std::string qs = t.substr(slash + 1);
      const double q = std::stod(qs, &used);
      if (used != qs.size() || q == 0.0) throw std::invalid_argument(t);
      return p / q;
    }
    const double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::logic_error&) {
    throw Error(Errc::ParseError, "not a number: '" + t + "'");
  }
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    const std::string t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

inline std::vector<double> number_list(const Config& c, const std::string& key,
                                       std::vector<double> fallback) {
  auto it = c.find(key);
  if (it == c.end()) return fallback;
  std::vector<double> out;
  for (const auto& s : split_list(it->second)) out.push_back(parse_number(s));
  return out;
}

inline LatticeSpec lattice_from_config(const Config& c) {
  LatticeSpec spec;
  for (const auto& [key, value] : c) {
    if (key == "L") spec.L = static_cast<int>(parse_number(value));
    else if (key == "flux") spec.flux = parse_number(value);
    else if (key == "fermi_level" || key == "fermi") spec.fermi_level = parse_number(value);
    else if (key == "orbitals") spec.orbitals = static_cast<int>(parse_number(value));
    else if (key == "stagger") spec.stagger = parse_number(value);
    else throw Error(Errc::ParseError, "lattice config: unknown key '" + key + "'");
  }
  spec.validate();
  return spec;
}

}  // namespace acm::io
