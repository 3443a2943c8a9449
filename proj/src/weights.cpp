#include "fusion/weights.hpp"

#include <cmath>
#include <limits>

#include "fusion/divergence.hpp"
#include "fusion/pooling.hpp"
#include "fusion/simplex.hpp"

namespace fusion {

namespace {

void require_positive_profile(const OpinionProfile& profile, const char* what) {
  if (!profile.positive()) throw PositivityError(std::string(what) + " requires a positive opinion profile");
}

void require_weight_count(std::size_t k, const Eigen::VectorXd& w) {
  if (static_cast<std::size_t>(w.size()) != k) throw DimensionError("one weight per agent is required");
}

// log ∫ Π q_k^{w_k} = −log c(w), for arbitrary real w.
double log_partition(const OpinionProfile& profile, const std::vector<Eigen::ArrayXd>& logs, const Eigen::VectorXd& w) {
  Eigen::ArrayXd s = Eigen::ArrayXd::Zero(profile.grid().size());
  for (std::size_t k = 0; k < logs.size(); ++k) s += w(k) * logs[k];
  const double m = s.maxCoeff();
  return m + std::log((profile.grid().quadrature_weights() * (s - m).exp()).sum());
}

std::vector<Eigen::ArrayXd> log_values(const OpinionProfile& profile) {
  std::vector<Eigen::ArrayXd> logs;
  for (const auto& d : profile.densities()) logs.push_back((d.normalized() ? d : normalize(d)).values().log());
  return logs;
}

double kl_term(const Eigen::MatrixXd& table, const Eigen::VectorXd& w) {
  const Eigen::Index k = table.rows();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      if (j != i) acc += w(j) * table(i, j);
  return acc / static_cast<double>(k);
}

}  // namespace

Eigen::VectorXd simplex_gradient(const SimplexObjective& f, const Eigen::VectorXd& w, double step) {
  Eigen::VectorXd g(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    Eigen::VectorXd a = w, b = w;
    a(i) += step;
    b(i) -= step;
    g(i) = (f(a) - f(b)) / (2.0 * step);
  }
  return (g.array() - g.mean()).matrix();
}

double projected_gradient_norm(const Eigen::VectorXd& w, const Eigen::VectorXd& g) {
  return (w - project_to_simplex(w - g)).norm();
}

WeightResult minimize_on_simplex(const SimplexObjective& f, Eigen::VectorXd w0, const SimplexSearchOptions& opts) {
  WeightResult r;
  r.weights = project_to_simplex(w0);
  r.objective = f(r.weights);
  for (r.iterations = 0;; ++r.iterations) {
    const Eigen::VectorXd g = simplex_gradient(f, r.weights, opts.fd_step);
    r.gradient_norm = projected_gradient_norm(r.weights, g);
    if (r.gradient_norm < opts.tol) {
      r.converged = true;
      return r;
    }
    if (r.iterations >= opts.max_iter)
      throw NonConvergenceError("simplex search did not converge in " + std::to_string(opts.max_iter) + " iterations", r);
    bool moved = false;
    for (double t = 1.0; t > 1e-16; t *= 0.5) {
      const Eigen::VectorXd cand = project_to_simplex(r.weights - t * g);
      const double fc = f(cand);
      if (fc <= r.objective + opts.armijo * g.dot(cand - r.weights)) {
        moved = fc < r.objective || (cand - r.weights).norm() > 0.0;
        r.weights = cand;
        r.objective = fc;
        break;
      }
    }
    if (!moved) throw NonConvergenceError("line search could not decrease the objective", r);
  }
}

Eigen::MatrixXd kld_table(const OpinionProfile& profile) {
  const std::size_t k = profile.size();
  std::vector<GridDensity> norm;
  for (const auto& d : profile.densities()) norm.push_back(d.normalized() ? d : normalize(d));
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (i != j) t(i, j) = kl(norm[i], norm[j]);
  return t;
}

double min_kld_objective(const OpinionProfile& profile, const Eigen::MatrixXd& table, const Eigen::VectorXd& w) {
  require_weight_count(profile.size(), w);
  require_positive_profile(profile, "the minimum-KLD objective");
  return log_partition(profile, log_values(profile), w) + kl_term(table, w);
}

double min_kld_objective(const OpinionProfile& profile, const Eigen::VectorXd& w) {
  return min_kld_objective(profile, kld_table(profile), w);
}

WeightResult min_kld_weights(const OpinionProfile& profile, int max_iter, double tol) {
  require_positive_profile(profile, "minimum-KLD weights");
  if (profile.size() < 2) throw ValueError("minimum-KLD weights need at least two agents");
  const Eigen::MatrixXd table = kld_table(profile);
  const auto logs = log_values(profile);
  const SimplexObjective f = [&](const Eigen::VectorXd& w) {
    return log_partition(profile, logs, w) + kl_term(table, w);
  };
  const Eigen::Index k = static_cast<Eigen::Index>(profile.size());
  SimplexSearchOptions opts;
  opts.max_iter = max_iter;
  opts.tol = tol;
  return minimize_on_simplex(f, Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k)), opts);
}

double reverse_kld_objective(const OpinionProfile& profile, const Eigen::VectorXd& w) {
  require_positive_profile(profile, "the reverse-KLD objective");
  require_weight_count(profile.size(), w);
  require_simplex(w);
  const GridDensity qw = log_linear_pool(profile, w);
  double acc = 0.0;
  for (const auto& d : profile.densities()) acc += kl(qw, d.normalized() ? d : normalize(d));
  return acc / static_cast<double>(profile.size());
}

Eigen::VectorXd discrepancy_weights(const OpinionProfile& profile) {
  require_positive_profile(profile, "discrepancy weights");
  if (profile.size() < 2) throw ValueError("discrepancy weights need at least two agents");
  const Eigen::MatrixXd table = kld_table(profile);
  Eigen::VectorXd gamma(table.rows());
  for (Eigen::Index i = 0; i < table.rows(); ++i) {
    const double worst = table.row(i).maxCoeff();
    if (!(worst > 0.0)) throw DegenerateError("agent " + std::to_string(i) + " has zero maximum discrepancy");
    gamma(i) = 1.0 / worst;
  }
  return gamma / gamma.sum();
}

CiCriterion parse_ci_criterion(const std::string& name) {
  if (name == "trace") return CiCriterion::Trace;
  if (name == "logdet") return CiCriterion::LogDet;
  throw ValueError("unknown covariance intersection criterion '" + name + "'");
}

double ci_objective(const std::vector<GaussianD>& gaussians, const Eigen::VectorXd& w, CiCriterion criterion) {
  require_weight_count(gaussians.size(), w);
  const Eigen::Index d = gaussians.front().dim();
  Eigen::MatrixXd info = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t k = 0; k < gaussians.size(); ++k) info += w(k) * gaussians[k].precision();
  Eigen::LLT<Eigen::MatrixXd> llt(symmetrize<double>(info));
  if (llt.info() != Eigen::Success) throw SingularityError("combined precision is not positive definite");
  if (criterion == CiCriterion::Trace)
    return llt.solve(Eigen::MatrixXd::Identity(d, d)).trace();
  return -2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

WeightResult ci_weights(const std::vector<GaussianD>& gaussians, CiCriterion criterion, int max_iter, double tol) {
  if (gaussians.size() < 2) throw ValueError("covariance intersection weights need at least two Gaussians");
  for (const auto& g : gaussians)
    if (g.dim() != gaussians.front().dim()) throw DimensionError("Gaussians must share a dimension");
  const SimplexObjective f = [&](const Eigen::VectorXd& w) { return ci_objective(gaussians, w, criterion); };
  const Eigen::Index k = static_cast<Eigen::Index>(gaussians.size());
  if (k > 2) {
    SimplexSearchOptions opts;
    opts.max_iter = max_iter;
    opts.tol = tol;
    return minimize_on_simplex(f, Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k)), opts);
  }
  auto at = [](double a) { return Eigen::Vector2d(a, 1.0 - a).eval(); };
  auto h = [&](double a) { return f(at(a)); };
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = 1.0;
  double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
  double f1 = h(x1), f2 = h(x2);
  WeightResult r;
  for (r.iterations = 0; hi - lo > tol; ++r.iterations) {
    if (r.iterations >= max_iter) {
      r.weights = at(0.5 * (lo + hi));
      r.objective = h(0.5 * (lo + hi));
      throw NonConvergenceError("golden-section search did not converge", r);
    }
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = h(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = h(x2);
    }
  }
  double best = 0.5 * (lo + hi), fbest = h(best);
  for (double a : {0.0, 1.0})
    if (const double fa = h(a); fa < fbest) {
      best = a;
      fbest = fa;
    }
  r.weights = at(best);
  r.objective = fbest;
  r.converged = true;
  SimplexSearchOptions opts;
  r.gradient_norm = projected_gradient_norm(r.weights, simplex_gradient(f, r.weights, opts.fd_step));
  return r;
}

}  // namespace fusion
