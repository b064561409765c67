#include "ousig/io.hpp"

#include <cmath>
#include <sstream>

namespace ousig::io {

json to_json(const Tensord& t) {
  json j;
  j["dim"] = t.dim();
  j["level"] = t.level();
  j["entries"] = std::vector<double>(t.entries().data(),
                                     t.entries().data() + t.size());
  return j;
}

Tensord tensor_from_json(const json& j) {
  const int dim = j.at("dim").get<int>();
  const int level = j.at("level").get<int>();
  const auto entries = j.at("entries").get<std::vector<double>>();
  Tensord t(dim, level);
  if (static_cast<std::int64_t>(entries.size()) != t.size())
    throw ConfigError("tensor entries length does not match dim^level");
  for (std::int64_t i = 0; i < t.size(); ++i) t.entries()[i] = entries[i];
  return t;
}

json to_json(const TensorSeriesd& s) {
  json levels = json::array();
  for (int k = 0; k <= s.depth(); ++k) levels.push_back(to_json(s.level(k)));
  return json{{"dim", s.dim()}, {"depth", s.depth()}, {"levels", levels}};
}

TensorSeriesd series_from_json(const json& j) {
  TensorSeriesd s(j.at("dim").get<int>(), j.at("depth").get<int>());
  const auto& levels = j.at("levels");
  for (int k = 0; k <= s.depth(); ++k)
    s.level(k) = tensor_from_json(levels.at(k));
  return s;
}

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != n)
      throw ConfigError("matrix rows must form a square array");
    for (Eigen::Index k = 0; k < n; ++k) m(i, k) = rows[i][k];
  }
  return m;
}

json to_json(const SpectralProfile& p) {
  return json{{"lambda", p.lambda}, {"Lambda", p.Lambda}, {"K", p.K}};
}

SpectralProfile profile_from_json(const json& j) {
  return SpectralProfile{j.at("lambda").get<double>(),
                         j.at("Lambda").get<double>(),
                         j.at("K").get<double>()};
}

json to_json(const ModelParams& p) {
  return json{{"d", p.dim()},
              {"M", to_json(p.M)},
              {"m", p.m},
              {"p", std::vector<double>(p.p.data(), p.p.data() + p.p.size())},
              {"N", p.N}};
}

ModelParams params_from_json(const json& j) {
  ModelParams p;
  p.M = matrix_from_json(j.at("M"));
  p.m = j.at("m").get<double>();
  const auto pv = j.at("p").get<std::vector<double>>();
  p.p = Eigen::Map<const Vector>(pv.data(), pv.size());
  p.N = j.at("N").get<int>();
  return p;
}

json to_json(const McEstimate& est, const ModelParams& params, double t) {
  return json{{"params", to_json(params)}, {"t", t},
              {"N", est.mean.depth()},     {"paths", est.paths},
              {"steps", est.steps},        {"seed", est.seed},
              {"mean", to_json(est.mean)}, {"stderr", to_json(est.stderr_)}};
}

json to_json(const EsigResult& r, const ModelParams& params) {
  json j;
  j["params"] = to_json(params);
  j["regime"] = r.regime == Regime::limit ? "limit" : "finite-mass";
  if (r.regime == Regime::finite_mass) j["m"] = r.mass;
  j["t"] = r.t;
  j["series"] = to_json(r.series);
  j["provenance"] = r.provenance;
  return j;
}

json to_json(const ConvergenceReport& r) {
  json j;
  j["level"] = r.level;
  j["m_grid"] = r.m_grid;
  j["errors"] = r.errors;
  j["bounds"] = r.bounds;
  j["floor"] = r.floor;
  if (std::isfinite(r.slope)) j["slope"] = r.slope;
  j["reference_constant"] = r.reference_constant;
  return j;
}

json to_json(const PdeResidual& r) {
  json probes = json::array();
  for (std::size_t i = 0; i < r.probes.size(); ++i) {
    const auto& p = r.probes[i].p;
    probes.push_back(json{{"t", r.probes[i].t},
                          {"p", std::vector<double>(p.data(), p.data() + p.size())},
                          {"residual", r.residual_norms[i]}});
  }
  return json{{"level", r.level},
              {"probes", probes},
              {"max_residual", r.max_residual}};
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(fields[i]);
  }
  out += "\r\n";
  return out;
}

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string report_csv(const ConvergenceReport& r) {
  std::string out = csv_row({"m", "error", "bound"});
  for (std::size_t i = 0; i < r.m_grid.size(); ++i)
    out += csv_row({num(r.m_grid[i]), num(r.errors[i]), num(r.bounds[i])});
  return out;
}

std::string series_csv(const TensorSeriesd& s) {
  std::string out = csv_row({"level", "index", "value"});
  std::vector<int> idx;
  for (int k = 0; k <= s.depth(); ++k) {
    const Tensord& t = s.level(k);
    idx.resize(k);
    for (std::int64_t f = 0; f < t.size(); ++f) {
      t.multi_index(f, idx);
      std::string label;
      for (int l = 0; l < k; ++l) {
        if (l) label += '.';
        label += std::to_string(idx[l] + 1);
      }
      out += csv_row({std::to_string(k), label, num(t.entries()[f])});
    }
  }
  return out;
}

}  // namespace ousig::io
