#pragma once

#include <iosfwd>
#include <json.hpp>
#include <optional>
#include <string>

#include "fusion/axioms.hpp"
#include "fusion/gaussian.hpp"
#include "fusion/grid_density.hpp"
#include "fusion/supra_bayes.hpp"
#include "fusion/weights.hpp"

namespace fusion {

using json = nlohmann::json;

// "%.17g" formatting, shortest form that round-trips every double.
std::string format_double(double v);

// Header "# dims,lower...,upper...,shape..." followed by one value per node, row-major.
void write_grid_csv(std::ostream& os, const GridDensity& d);
GridDensity read_grid_csv(std::istream& is);
void write_grid_csv_file(const std::string& path, const GridDensity& d);
GridDensity read_grid_csv_file(const std::string& path);

json to_json(const Eigen::VectorXd& v);
json to_json(const Eigen::MatrixXd& m);
Eigen::VectorXd vector_from_json(const json& j, const char* what);
Eigen::MatrixXd matrix_from_json(const json& j, const char* what);

json to_json(const GaussianD& g);
GaussianD gaussian_from_json(const json& j);
json to_json(const Moments& m);
json to_json(const WeightResult& r);
json to_json(const AxiomCheckReport& r);
json to_json(const SupraFusionResult<double>& r);

json to_json(const LinearGaussianModelD& m);
LinearGaussianModelD model_from_json(const json& j);

json read_json_file(const std::string& path);

}  // namespace fusion
