#include "fusion/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fusion/axioms.hpp"
#include "fusion/divergence.hpp"
#include "fusion/errors.hpp"
#include "fusion/fig4.hpp"
#include "fusion/io.hpp"
#include "fusion/pooling.hpp"
#include "fusion/supra_bayes.hpp"
#include "fusion/weights.hpp"

namespace fusion::cli {

namespace {

bool is_json_path(const std::string& p) {
  return std::filesystem::path(p).extension() == ".json";
}

Eigen::VectorXd parse_list(const std::string& text, const char* what) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ValueError(std::string("cannot parse ") + what + " entry '" + item + "'");
    }
  }
  if (v.empty()) throw ValueError(std::string(what) + " list is empty");
  return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Shared grid for Gaussian inputs: the union of mean ± 8σ boxes.
Grid gaussian_union_grid(const std::vector<GaussianD>& gs) {
  const Eigen::Index d = gs.front().dim();
  if (d > 2) throw DimensionError("grids support Gaussians of dimension 1 or 2");
  std::vector<double> lo(d, std::numeric_limits<double>::infinity()), hi(d, -std::numeric_limits<double>::infinity());
  for (const auto& g : gs) {
    if (g.dim() != d) throw DimensionError("Gaussian inputs must share a dimension");
    for (Eigen::Index i = 0; i < d; ++i) {
      const double s = kGaussianGridSigmas * std::sqrt(g.cov()(i, i));
      lo[i] = std::min(lo[i], g.mean()(i) - s);
      hi[i] = std::max(hi[i], g.mean()(i) + s);
    }
  }
  const Eigen::Index n = d == 1 ? default_grid_points_1d() : kDefaultGridPoints2d;
  return Grid(lo, hi, std::vector<Eigen::Index>(d, n));
}

GridDensity read_density(const std::string& path, const std::optional<Grid>& grid) {
  if (!is_json_path(path)) return normalize(read_grid_csv_file(path));
  const GaussianD g = gaussian_from_json(read_json_file(path));
  const Grid gr = grid ? *grid : gaussian_union_grid({g});
  return to_grid(g, gr.lower(), gr.upper(), gr.shape());
}

struct LoadedProfile {
  OpinionProfile profile;
  std::vector<std::optional<GaussianD>> gaussians;
};

LoadedProfile load_profile(const std::vector<std::string>& paths) {
  std::optional<Grid> grid;
  std::vector<std::optional<GaussianD>> gs;
  std::vector<GaussianD> present;
  for (const auto& p : paths) {
    if (is_json_path(p)) {
      gs.push_back(gaussian_from_json(read_json_file(p)));
      present.push_back(*gs.back());
    } else {
      gs.push_back(std::nullopt);
      if (!grid) grid = read_grid_csv_file(p).grid();
    }
  }
  if (!grid) grid = gaussian_union_grid(present);
  std::vector<GridDensity> ds;
  for (std::size_t i = 0; i < paths.size(); ++i)
    ds.push_back(gs[i] ? to_grid(*gs[i], grid->lower(), grid->upper(), grid->shape())
                       : normalize(read_grid_csv_file(paths[i])));
  return {OpinionProfile(std::move(ds)), std::move(gs)};
}

struct PoolFlags {
  std::string kind;
  std::string weights;
  double alpha = 1.0;
  std::string q0;
  std::string xi0;
  int dictator = 0;
  std::string chi = "identity";
};

void add_pool_flags(CLI::App* sub, PoolFlags& f) {
  sub->add_option("--kind", f.kind, "pooling kind")->required();
  sub->add_option("--weights", f.weights, "comma-separated weights (generalized-linear: w0 first)");
  sub->add_option("--alpha", f.alpha, "Holder exponent");
  sub->add_option("--chi", f.chi, "identity | log | reciprocal | power:<a>");
  sub->add_option("--dictator", f.dictator, "dictator agent, 1-based");
}

PoolingSpec make_spec(const PoolFlags& f, std::size_t k, const std::optional<Grid>& grid) {
  PoolingSpec s;
  s.kind = parse_pooling_kind(f.kind);
  s.alpha = f.alpha;
  s.chi = parse_chi(f.chi);
  if (!f.weights.empty()) {
    s.weights = parse_list(f.weights, "weights");
  } else if (s.kind == PoolingKind::GeneralizedLinear) {
    throw ValueError("generalized-linear pooling needs --weights w0,w1,...,wK");
  } else if (s.kind == PoolingKind::GeneralizedMultiplicative) {
    s.weights = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(k));
  } else if (s.kind != PoolingKind::Multiplicative) {
    s.weights = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(k), 1.0 / static_cast<double>(k));
  }
  if (f.dictator != 0) {
    if (f.dictator < 1) throw IndexError("--dictator is 1-based");
    s.dictator = static_cast<std::size_t>(f.dictator - 1);
  } else if (s.kind == PoolingKind::Dictatorship) {
    s.dictator = 0;
  }
  if (!f.q0.empty()) s.q0 = read_density(f.q0, grid);
  if (!f.xi0.empty()) s.xi0 = read_grid_csv_file(f.xi0).values();
  return s;
}

int report_error(std::ostream& err, const char* name, ErrorCategory cat, const std::string& msg) {
  static const char* names[] = {"input", "numerical", "convergence"};
  json line = {{"error", name}, {"category", names[static_cast<int>(cat)]}, {"message", msg}};
  err << line.dump() << '\n';
  switch (cat) {
    case ErrorCategory::Input: return kExitInput;
    case ErrorCategory::Numerical: return kExitNumerical;
    case ErrorCategory::Convergence: return kExitConvergence;
  }
  return kExitNumerical;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fusion of probability density functions"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  // pool
  PoolFlags pf;
  std::vector<std::string> pool_inputs;
  std::string pool_output;
  auto* pool_cmd = app.add_subcommand("pool", "fuse agent densities into one grid density");
  add_pool_flags(pool_cmd, pf);
  pool_cmd->add_option("--q0", pf.q0, "calibrating pdf (grid CSV or Gaussian JSON)");
  pool_cmd->add_option("--xi0", pf.xi0, "xi0 values as a grid CSV");
  pool_cmd->add_option("-o,--output", pool_output, "fused density CSV")->required();
  pool_cmd->add_option("inputs", pool_inputs, "agent densities (grid CSV or Gaussian JSON)")->required();

  // divergence
  std::string div_kind = "kl", div_chi = "identity";
  double div_alpha = 0.5;
  std::vector<std::string> div_inputs;
  auto* div_cmd = app.add_subcommand("divergence", "discrepancy between two densities");
  div_cmd->add_option("--kind", div_kind, "kl | reverse-kl | alpha | reverse-alpha | pearson | l2 | chi-distance");
  div_cmd->add_option("--alpha", div_alpha, "alpha for alpha-divergences");
  div_cmd->add_option("--chi", div_chi, "transform for chi-distance");
  div_cmd->add_option("inputs", div_inputs, "two densities")->required()->expected(2);

  // weights
  std::string w_method = "min-kld", w_criterion = "trace", w_at;
  int w_max_iter = 1000;
  double w_tol = -1.0;
  std::vector<std::string> w_inputs;
  auto* w_cmd = app.add_subcommand("weights", "choose pooling weights");
  w_cmd->add_option("--method", w_method, "min-kld | reverse-kld | discrepancy | ci");
  w_cmd->add_option("--criterion", w_criterion, "trace | logdet (ci only)");
  w_cmd->add_option("--at", w_at, "weights at which to evaluate reverse-kld");
  w_cmd->add_option("--max-iter", w_max_iter, "iteration limit");
  w_cmd->add_option("--tol", w_tol, "stopping tolerance");
  w_cmd->add_option("inputs", w_inputs, "agent densities (Gaussian JSON for ci)")->required();

  // axiom-check
  PoolFlags af;
  std::string a_axiom = "all";
  int a_trials = 100;
  std::uint64_t a_seed = 0;
  double a_tol = 1e-6;
  auto* a_cmd = app.add_subcommand("axiom-check", "randomized check of pooling axioms");
  add_pool_flags(a_cmd, af);
  a_cmd->add_option("--axiom", a_axiom, "A1..A12 or all");
  a_cmd->add_option("--trials", a_trials, "number of trials");
  a_cmd->add_option("--seed", a_seed, "random seed");
  a_cmd->add_option("--tol", a_tol, "identity tolerance");

  // supra
  std::string s_model, s_private, s_y, s_dump;
  bool s_scalar = false, s_vector = false;
  auto* s_cmd = app.add_subcommand("supra", "supra-Bayesian fusion for a linear Gaussian model");
  s_cmd->add_option("--model", s_model, "model JSON (H_blocks, Sigma, prior_mean, prior_cov, optional y or t)");
  s_cmd->add_option("--private-shared", s_private, "shared and private counts as r0:r1,...,rK");
  s_cmd->add_option("--y", s_y, "comma-separated observations");
  s_cmd->add_option("--dump-model", s_dump, "write the model JSON to this path");
  s_cmd->add_flag("--scalar", s_scalar, "scalar fusion rule");
  s_cmd->add_flag("--vector", s_vector, "vector fusion rule");

  // fig4
  std::string f_dir = ".";
  Eigen::Index f_points = 0;
  auto* f_cmd = app.add_subcommand("fig4", "write the Holder pooling figure data");
  f_cmd->add_option("--output-dir", f_dir, "directory for fig4a.csv and fig4b.csv");
  f_cmd->add_option("--points", f_points, "grid points (default FUSION_GRID_POINTS or 2048)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    return report_error(err, "UsageError", ErrorCategory::Input, e.what());
  }

  try {
    if (*pool_cmd) {
      const LoadedProfile lp = load_profile(pool_inputs);
      const PoolingSpec spec = make_spec(pf, lp.profile.size(), lp.profile.grid());
      const GridDensity fused = pool(lp.profile, spec);
      write_grid_csv_file(pool_output, fused);
      out << json{{"output", pool_output}, {"kind", to_string(spec.kind)}, {"moments", to_json(moments(fused))}}.dump(2)
          << '\n';
    } else if (*div_cmd) {
      std::optional<Grid> grid;
      for (const auto& p : div_inputs)
        if (!is_json_path(p)) grid = read_grid_csv_file(p).grid();
      if (!grid) {
        std::vector<GaussianD> gs;
        for (const auto& p : div_inputs) gs.push_back(gaussian_from_json(read_json_file(p)));
        grid = gaussian_union_grid(gs);
      }
      DivergenceSpec spec{parse_divergence_kind(div_kind), div_alpha, parse_chi(div_chi)};
      out << format_double(divergence(read_density(div_inputs[0], grid), read_density(div_inputs[1], grid), spec)) << '\n';
    } else if (*w_cmd) {
      if (w_method == "ci") {
        std::vector<GaussianD> gs;
        for (const auto& p : w_inputs) gs.push_back(gaussian_from_json(read_json_file(p)));
        const WeightResult r = ci_weights(gs, parse_ci_criterion(w_criterion), w_max_iter, w_tol > 0 ? w_tol : 1e-9);
        out << to_json(r).dump(2) << '\n';
      } else {
        const LoadedProfile lp = load_profile(w_inputs);
        if (w_method == "min-kld") {
          try {
            out << to_json(min_kld_weights(lp.profile, w_max_iter, w_tol > 0 ? w_tol : 1e-7)).dump(2) << '\n';
          } catch (const NonConvergenceError& e) {
            out << to_json(e.best()).dump(2) << '\n';
            throw;
          }
        } else if (w_method == "reverse-kld") {
          const Eigen::Index k = static_cast<Eigen::Index>(lp.profile.size());
          const Eigen::VectorXd w = w_at.empty() ? Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k))
                                                 : parse_list(w_at, "weights");
          out << json{{"weights", to_json(w)}, {"objective", reverse_kld_objective(lp.profile, w)}}.dump(2) << '\n';
        } else if (w_method == "discrepancy") {
          out << json{{"weights", to_json(discrepancy_weights(lp.profile))}}.dump(2) << '\n';
        } else {
          throw ValueError("unknown weights method '" + w_method + "'");
        }
      }
    } else if (*a_cmd) {
      const PoolingSpec spec = make_spec(af, static_cast<std::size_t>(af.weights.empty() ? 3 : parse_list(af.weights, "weights").size()),
                                         std::nullopt);
      if (a_axiom == "all") {
        json reports = json::array();
        for (int i = 1; i <= kAxiomCount; ++i) {
          try {
            reports.push_back(to_json(check_axiom(spec, axiom_from_index(i), a_trials, a_seed, a_tol)));
          } catch (const UnsupportedAxiomError&) {
            reports.push_back({{"axiom", to_string(axiom_from_index(i))}, {"status", "n.a."}});
          }
        }
        out << reports.dump(2) << '\n';
      } else {
        out << to_json(check_axiom(spec, parse_axiom(a_axiom), a_trials, a_seed, a_tol)).dump(2) << '\n';
      }
    } else if (*s_cmd) {
      std::optional<LinearGaussianModelD> model;
      json extra = json::object();
      std::optional<Eigen::VectorXd> y, t;
      if (!s_private.empty()) {
        const auto colon = s_private.find(':');
        if (colon == std::string::npos) throw ValueError("--private-shared expects r0:r1,...,rK");
        const int r0 = static_cast<int>(parse_list(s_private.substr(0, colon), "r0")(0));
        const Eigen::VectorXd rv = parse_list(s_private.substr(colon + 1), "private counts");
        std::vector<int> r;
        for (Eigen::Index i = 0; i < rv.size(); ++i) r.push_back(static_cast<int>(rv(i)));
        model = private_shared_model<double>(r.size(), r0, r);
        extra["closed_form_weights"] = to_json(private_shared_weights<double>(r.size(), r0, r));
      } else if (!s_model.empty()) {
        const json j = read_json_file(s_model);
        model = model_from_json(j);
        if (j.contains("y")) y = vector_from_json(j.at("y"), "y");
        if (j.contains("t")) t = vector_from_json(j.at("t"), "t");
      } else {
        throw ValueError("supra needs --model or --private-shared");
      }
      if (!s_dump.empty()) {
        std::ofstream os(s_dump);
        if (!os) throw ValueError("cannot open '" + s_dump + "' for writing");
        os << to_json(*model).dump(2) << '\n';
      }
      if (!s_y.empty()) y = parse_list(s_y, "y");
      if (y) t = local_statistics(*model, *y).t;
      const bool have_stats = t.has_value();
      if (!t) t = Eigen::VectorXd::Zero(model->dim_theta() * static_cast<Eigen::Index>(model->K()));
      const bool scalar = s_scalar || (!s_vector && model->dim_theta() == 1);
      const auto r = scalar ? scalar_fusion(*model, *t, y) : vector_fusion(*model, *t, y);
      json j = to_json(r);
      if (!have_stats) j["posterior"]["mean"] = nullptr;
      j["rule"] = scalar ? "scalar" : "vector";
      j.update(extra);
      out << j.dump(2) << '\n';
    } else if (*f_cmd) {
      const Eigen::Index n = f_points > 0 ? f_points : default_grid_points_1d();
      std::filesystem::create_directories(f_dir);
      json summary = json::object();
      for (char panel : {'a', 'b'}) {
        const Fig4Panel p = fig4_panel(panel, n);
        const std::string path = (std::filesystem::path(f_dir) / (std::string("fig4") + panel + ".csv")).string();
        write_fig4_csv(path, p);
        json cols = json::object();
        for (const auto& [label, d] : p.fused)
          cols[label] = {{"modes", local_maxima(d)}, {"fourth_central_moment", central_moment(d, 0, 4)}};
        summary[std::string(1, panel)] = {{"file", path}, {"fused", cols}};
      }
      out << summary.dump(2) << '\n';
    }
  } catch (const FusionError& e) {
    return report_error(err, e.name(), e.category(), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return report_error(err, "IOError", ErrorCategory::Input, e.what());
  } catch (const std::exception& e) {
    return report_error(err, "InternalError", ErrorCategory::Numerical, e.what());
  }
  return kExitOk;
}

}  // namespace fusion::cli
