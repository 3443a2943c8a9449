#include "fusion/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "fusion/errors.hpp"

namespace fusion {

namespace {

double parse_number(const std::string& text, const char* what) {
  const char* begin = text.c_str();
  while (*begin == ' ' || *begin == '\t') ++begin;
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
  if (end == begin || *end != '\0') throw ValueError(std::string("cannot parse ") + what + " '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(item);
  return out;
}

double as_double(const json& j, const char* what) {
  if (!j.is_number()) throw ValueError(std::string(what) + " must contain numbers");
  return j.get<double>();
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_grid_csv(std::ostream& os, const GridDensity& d) {
  const Grid& g = d.grid();
  os << "# " << g.dims();
  for (double v : g.lower()) os << ',' << format_double(v);
  for (double v : g.upper()) os << ',' << format_double(v);
  for (auto s : g.shape()) os << ',' << s;
  os << '\n';
  for (Eigen::Index i = 0; i < d.values().size(); ++i) os << format_double(d.values()(i)) << '\n';
}

GridDensity read_grid_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.empty() || line[0] != '#') throw ValueError("grid CSV must start with a '#' header");
  const auto fields = split(line.substr(1), ',');
  if (fields.empty()) throw ValueError("grid CSV header is empty");
  const double dims_raw = parse_number(fields[0], "dims");
  const int dims = static_cast<int>(dims_raw);
  if (dims != dims_raw || dims < 1 || dims > 2) throw DimensionError("grid CSV dims must be 1 or 2");
  if (fields.size() != static_cast<std::size_t>(1 + 3 * dims)) throw ValueError("grid CSV header has the wrong field count");
  std::vector<double> lo, hi;
  std::vector<Eigen::Index> shape;
  for (int d = 0; d < dims; ++d) {
    lo.push_back(parse_number(fields[1 + d], "lower bound"));
    hi.push_back(parse_number(fields[1 + dims + d], "upper bound"));
    const double s = parse_number(fields[1 + 2 * dims + d], "shape");
    if (s != static_cast<double>(static_cast<Eigen::Index>(s))) throw ValueError("grid shape must be an integer");
    shape.push_back(static_cast<Eigen::Index>(s));
  }
  std::vector<double> values;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    values.push_back(parse_number(line, "density value"));
  }
  return GridDensity::from_samples(std::move(lo), std::move(hi), std::move(shape),
                                   Eigen::Map<const Eigen::ArrayXd>(values.data(), static_cast<Eigen::Index>(values.size())));
}

void write_grid_csv_file(const std::string& path, const GridDensity& d) {
  std::ofstream os(path);
  if (!os) throw ValueError("cannot open '" + path + "' for writing");
  write_grid_csv(os, d);
  if (!os) throw ValueError("failed writing '" + path + "'");
}

GridDensity read_grid_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValueError("cannot open '" + path + "'");
  return read_grid_csv(is);
}

json to_json(const Eigen::VectorXd& v) {
  json j = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

json to_json(const Eigen::MatrixXd& m) {
  json j = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    j.push_back(std::move(row));
  }
  return j;
}

Eigen::VectorXd vector_from_json(const json& j, const char* what) {
  if (j.is_number()) return Eigen::VectorXd::Constant(1, j.get<double>());
  if (!j.is_array()) throw ValueError(std::string(what) + " must be an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = as_double(j[i], what);
  return v;
}

Eigen::MatrixXd matrix_from_json(const json& j, const char* what) {
  if (j.is_number()) return Eigen::MatrixXd::Constant(1, 1, j.get<double>());
  if (!j.is_array() || j.empty()) throw ValueError(std::string(what) + " must be a nonempty array of rows");
  // A flat array is read as a column.
  if (!j.front().is_array()) return vector_from_json(j, what);
  const std::size_t cols = j.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw ValueError(std::string(what) + " rows must have equal lengths");
    for (std::size_t k = 0; k < cols; ++k)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = as_double(j[i][k], what);
  }
  return m;
}

json to_json(const GaussianD& g) { return {{"mean", to_json(g.mean())}, {"cov", to_json(g.cov())}}; }

GaussianD gaussian_from_json(const json& j) {
  if (!j.is_object() || !j.contains("mean") || !j.contains("cov"))
    throw ValueError("a Gaussian needs \"mean\" and \"cov\" fields");
  return GaussianD(vector_from_json(j.at("mean"), "mean"), matrix_from_json(j.at("cov"), "cov"));
}

json to_json(const Moments& m) { return {{"mean", to_json(m.mean)}, {"cov", to_json(m.cov)}}; }

json to_json(const WeightResult& r) {
  return {{"weights", to_json(r.weights)},
          {"objective", r.objective},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"gradient_norm", r.gradient_norm}};
}

json to_json(const AxiomCheckReport& r) {
  json pooling = {{"kind", to_string(r.pooling.kind)}, {"weights", to_json(r.pooling.weights)}};
  if (r.pooling.kind == PoolingKind::Holder) pooling["alpha"] = r.pooling.alpha;
  if (r.pooling.kind == PoolingKind::ChiTransform) pooling["chi"] = to_string(r.pooling.chi);
  if (r.pooling.dictator) pooling["dictator"] = *r.pooling.dictator;
  json j = {{"axiom", to_string(r.axiom)},
            {"name", axiom_name(r.axiom)},
            {"pooling", pooling},
            {"trials", r.trials},
            {"tolerance", r.tolerance},
            {"max_violation", r.max_violation},
            {"passed", r.passed},
            {"counterexample", nullptr}};
  if (r.counterexample)
    j["counterexample"] = {{"seed", r.counterexample->seed},
                           {"trial", r.counterexample->trial},
                           {"descriptor", r.counterexample->descriptor}};
  return j;
}

json to_json(const SupraFusionResult<double>& r) {
  json j = {{"posterior", to_json(r.posterior)},
            {"oracle", r.oracle ? to_json(*r.oracle) : json(nullptr)},
            {"Sigma_tilde", to_json(r.Sigma_tilde)},
            {"Sigma_hat_inv", to_json(r.Sigma_hat_inv)}};
  if (r.scalar_weights) j["scalar_weights"] = to_json(*r.scalar_weights);
  if (r.vector_weights) {
    json w = json::array();
    for (const auto& m : *r.vector_weights) w.push_back(to_json(m));
    j["vector_weights"] = std::move(w);
  }
  if (r.G) j["G"] = to_json(*r.G);
  return j;
}

json to_json(const LinearGaussianModelD& m) {
  json h = json::array();
  for (const auto& b : m.H_blocks()) h.push_back(to_json(b));
  return {{"H_blocks", h},
          {"Sigma", to_json(m.Sigma())},
          {"prior_mean", to_json(m.prior().mean())},
          {"prior_cov", to_json(m.prior().cov())}};
}

LinearGaussianModelD model_from_json(const json& j) {
  for (const char* key : {"H_blocks", "Sigma", "prior_mean", "prior_cov"})
    if (!j.is_object() || !j.contains(key)) throw ValueError(std::string("model file is missing \"") + key + "\"");
  if (!j.at("H_blocks").is_array() || j.at("H_blocks").empty()) throw ValueError("\"H_blocks\" must be a nonempty array");
  std::vector<Eigen::MatrixXd> h;
  for (const auto& b : j.at("H_blocks")) h.push_back(matrix_from_json(b, "H block"));
  return LinearGaussianModelD(std::move(h), matrix_from_json(j.at("Sigma"), "Sigma"),
                              vector_from_json(j.at("prior_mean"), "prior_mean"),
                              matrix_from_json(j.at("prior_cov"), "prior_cov"));
}

json read_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValueError("cannot open '" + path + "'");
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw ValueError("invalid JSON in '" + path + "': " + e.what());
  }
}

}  // namespace fusion
