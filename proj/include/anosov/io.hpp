#pragma once
//
// JSON and CSV serialization of representations and reports.
//

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "anosov/diagnostics.hpp"
#include "anosov/errors.hpp"
#include "anosov/representation.hpp"
#include "anosov/words.hpp"

namespace anosov {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Non-finite values become the strings "inf", "-inf" and "nan".
inline json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline double read_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ParseError("expected a number, got " + j.dump());
}

inline json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(row);
  }
  return rows;
}

inline Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw ParseError("matrix must be a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (j[static_cast<std::size_t>(i)].size() != static_cast<std::size_t>(cols)) throw ParseError("ragged matrix rows");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = read_number(j[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
  }
  return m;
}

inline std::string generator_name(int i) { return std::string(1, letter_char(i)); }

inline json generators_json(const std::vector<Matrix>& gens) {
  json g = json::object();
  for (std::size_t i = 0; i < gens.size(); ++i) g[generator_name(static_cast<int>(i) + 1)] = matrix_json(gens[i]);
  return g;
}

inline std::vector<Matrix> generators_from_json(const json& j) {
  if (!j.is_object() || j.empty()) throw ParseError("generators must be a nonempty object");
  std::vector<Matrix> out;
  for (int i = 1; i <= static_cast<int>(j.size()); ++i) {
    const auto name = generator_name(i);
    if (!j.contains(name)) throw ParseError("generator '" + name + "' missing; generators must be named a, b, c, ...");
    out.push_back(matrix_from_json(j.at(name)));
  }
  return out;
}

inline json model_json(const GroupModel& m) {
  json j;
  if (m.is_free()) {
    j["kind"] = "free";
    j["rank"] = m.rank();
  } else {
    j["kind"] = "surface";
    j["genus"] = m.genus();
    j["bfsRadius"] = m.bfs_radius();
  }
  if (m.has_anchor()) {
    std::vector<Matrix> a(m.anchor().begin(), m.anchor().end());
    j["anchor"] = generators_json(a);
  }
  return j;
}

inline std::shared_ptr<const GroupModel> model_from_json(const json& j, int generatorCount) {
  const std::string kind = j.value("kind", "free");
  std::vector<Eigen::Matrix2d> anchor;
  if (j.contains("anchor")) {
    for (const auto& m : generators_from_json(j.at("anchor"))) {
      if (m.rows() != 2 || m.cols() != 2) throw ParseError("anchor matrices must be 2x2");
      anchor.push_back(m);
    }
  }
  if (kind == "free") {
    const int rank = j.value("rank", generatorCount);
    if (anchor.empty()) return GroupModel::free(rank);
    return GroupModel::free_anchored(rank, anchor);
  }
  if (kind == "surface") {
    const int genus = j.value("genus", generatorCount / 2);
    if (anchor.empty()) throw ParseError("surface model needs an anchor");
    return GroupModel::surface(genus, anchor, j.value("bfsRadius", 5));
  }
  throw ParseError("unknown group model kind '" + kind + "'");
}

inline json rep_json(const Representation& rho) {
  json j;
  j["dim"] = rho.dim();
  j["generators"] = generators_json(rho.generators());
  j["inverses"] = generators_json(rho.inverses());
  j["unimodularize"] = rho.unimodularized();
  j["model"] = model_json(rho.model());
  if (!rho.blocks().empty()) j["blocks"] = rho.blocks();
  return j;
}

inline Representation rep_from_json(const json& j) {
  try {
    const auto gens = generators_from_json(j.at("generators"));
    const int dim = j.value("dim", static_cast<int>(gens.front().rows()));
    for (const auto& g : gens)
      if (g.rows() != dim || g.cols() != dim) throw ParseError("generator shape does not match dim");
    auto model = j.contains("model") ? model_from_json(j.at("model"), static_cast<int>(gens.size()))
                                     : GroupModel::free(static_cast<int>(gens.size()));
    std::vector<int> blocks;
    if (j.contains("blocks")) blocks = j.at("blocks").get<std::vector<int>>();
    std::vector<Matrix> invs;
    if (j.contains("inverses")) {
      invs = generators_from_json(j.at("inverses"));
      if (invs.size() != gens.size()) throw ParseError("inverses must match the generators");
      for (std::size_t i = 0; i < gens.size(); ++i) {
        if (invs[i].rows() != dim || invs[i].cols() != dim) throw ParseError("inverse shape does not match dim");
        const double err = (gens[i] * invs[i] - Matrix::Identity(dim, dim)).norm();
        if (!(err < 1e-6)) throw ParseError("inverse of generator " + generator_name(static_cast<int>(i) + 1) + " is wrong");
      }
    }
    return Representation(model, gens, j.value("unimodularize", false), blocks, invs);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed representation JSON: ") + e.what());
  }
}

inline Representation load_rep(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("invalid JSON in " + path + ": " + e.what());
  }
  return rep_from_json(j);
}

inline void save_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw PreconditionError("cannot write " + path);
  out << j.dump(2) << "\n";
}

inline json report_json(const Report& r) {
  json j;
  j["criterion"] = r.criterion;
  json params = json::object();
  for (const auto& [k, v] : r.parameters) params[k] = number(v);
  for (const auto& [k, v] : r.settings) params[k] = v;
  j["parameters"] = params;
  json consts = json::object();
  for (const auto& [k, v] : r.constants) consts[k] = number(v);
  j["constants"] = consts;
  j["witnesses"] = r.witnesses;
  json verdicts = json::object();
  for (const auto& [k, v] : r.verdicts) verdicts[k] = to_string(v);
  j["verdicts"] = verdicts;
  j["verdict"] = to_string(r.verdict);
  json tables = json::object();
  for (const auto& [k, v] : r.tables) {
    json a = json::array();
    for (double x : v) a.push_back(number(x));
    tables[k] = a;
  }
  j["tables"] = tables;
  j["notes"] = r.notes;
  return j;
}

inline json reports_json(const std::vector<Report>& reports) {
  json j;
  j["schema"] = kSchemaVersion;
  j["reports"] = json::array();
  for (const auto& r : reports) j["reports"].push_back(report_json(r));
  return j;
}

inline std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

/// Long-format CSV of every table: criterion,table,index,value.
inline std::string reports_csv(const std::vector<Report>& reports) {
  std::ostringstream os;
  os << "criterion,table,index,value\n";
  for (const auto& r : reports)
    for (const auto& [name, v] : r.tables)
      for (std::size_t i = 0; i < v.size(); ++i) os << r.criterion << "," << name << "," << i << "," << format_double(v[i]) << "\n";
  return os.str();
}

/// Single-file SVG scatter of every table (index against value).
inline std::string reports_svg(const std::vector<Report>& reports) {
  struct Series {
    std::string name;
    std::vector<double> v;
  };
  std::vector<Series> all;
  for (const auto& r : reports)
    for (const auto& [name, v] : r.tables) all.push_back({r.criterion + "/" + name, v});
  const double W = 640, H = 360 * std::max<std::size_t>(1, all.size()), P = 50, h = 300;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  for (std::size_t s = 0; s < all.size(); ++s) {
    const double top = 360.0 * s;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double x : all[s].v)
      if (std::isfinite(x)) lo = std::min(lo, x), hi = std::max(hi, x);
    if (!std::isfinite(lo)) lo = 0, hi = 1;
    if (hi - lo < 1e-12) hi = lo + 1;
    const double n = std::max<double>(1, all[s].v.size() - 1);
    os << "<text x=\"" << P << "\" y=\"" << top + 20 << "\" font-size=\"14\">" << all[s].name << "</text>\n";
    os << "<rect x=\"" << P << "\" y=\"" << top + 30 << "\" width=\"" << W - 2 * P << "\" height=\"" << h
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"5\" y=\"" << top + 40 << "\" font-size=\"10\">" << format_double(hi) << "</text>\n";
    os << "<text x=\"5\" y=\"" << top + 30 + h << "\" font-size=\"10\">" << format_double(lo) << "</text>\n";
    for (std::size_t i = 0; i < all[s].v.size(); ++i) {
      const double x = all[s].v[i];
      if (!std::isfinite(x)) continue;
      const double cx = P + (W - 2 * P) * i / n;
      const double cy = top + 30 + h - h * (x - lo) / (hi - lo);
      os << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"3\" fill=\"steelblue\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace anosov
