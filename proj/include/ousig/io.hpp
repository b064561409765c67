#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "ousig/limit_engine.hpp"
#include "ousig/mc_oracle.hpp"
#include "ousig/pde_checker.hpp"

namespace ousig::io {

using json = nlohmann::json;

json to_json(const Tensord& t);
Tensord tensor_from_json(const json& j);

json to_json(const TensorSeriesd& s);
TensorSeriesd series_from_json(const json& j);

json to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

json to_json(const SpectralProfile& p);
SpectralProfile profile_from_json(const json& j);

json to_json(const ModelParams& p);
ModelParams params_from_json(const json& j);

json to_json(const McEstimate& est, const ModelParams& params, double t);
json to_json(const EsigResult& r, const ModelParams& params);
json to_json(const ConvergenceReport& r);
json to_json(const PdeResidual& r);

/// RFC-4180 field quoting.
std::string csv_escape(const std::string& field);
std::string csv_row(const std::vector<std::string>& fields);

std::string report_csv(const ConvergenceReport& r);
std::string series_csv(const TensorSeriesd& s);

}  // namespace ousig::io
