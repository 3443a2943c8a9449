#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "fusion/errors.hpp"
#include "fusion/gaussian.hpp"
#include "fusion/grid_density.hpp"

namespace fusion {

struct WeightResult {
  Eigen::VectorXd weights;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;
};

class NonConvergenceError : public FusionError {
 public:
  NonConvergenceError(const std::string& what, WeightResult best) : FusionError(what), best_(std::move(best)) {}
  const char* name() const noexcept override { return "NonConvergenceError"; }
  ErrorCategory category() const noexcept override { return ErrorCategory::Convergence; }
  const WeightResult& best() const { return best_; }

 private:
  WeightResult best_;
};

struct SimplexSearchOptions {
  int max_iter = 1000;
  double tol = 1e-7;
  double fd_step = 1e-5;
  double armijo = 1e-4;
};

using SimplexObjective = std::function<double(const Eigen::VectorXd&)>;

// Central-difference gradient projected onto the simplex tangent space.
Eigen::VectorXd simplex_gradient(const SimplexObjective& f, const Eigen::VectorXd& w, double step);
// Norm of w − P(w − g), zero exactly at constrained stationary points.
double projected_gradient_norm(const Eigen::VectorXd& w, const Eigen::VectorXd& g);
// Projected gradient descent from w0 with Armijo backtracking.
WeightResult minimize_on_simplex(const SimplexObjective& f, Eigen::VectorXd w0, const SimplexSearchOptions& opts);

// Pairwise table D(i, j) = D_KL(q_i‖q_j).
Eigen::MatrixXd kld_table(const OpinionProfile& profile);

// L(w) = −log c(w) + (1/K) Σ_k Σ_{j≠k} w_j D_KL(q_k‖q_j).
double min_kld_objective(const OpinionProfile& profile, const Eigen::VectorXd& w);
double min_kld_objective(const OpinionProfile& profile, const Eigen::MatrixXd& table, const Eigen::VectorXd& w);
WeightResult min_kld_weights(const OpinionProfile& profile, int max_iter = 1000, double tol = 1e-7);

// (1/K) Σ_k D_KL(q_w‖q_k) with q_w the log-linear pool.
double reverse_kld_objective(const OpinionProfile& profile, const Eigen::VectorXd& w);

Eigen::VectorXd discrepancy_weights(const OpinionProfile& profile);

enum class CiCriterion { Trace, LogDet };
CiCriterion parse_ci_criterion(const std::string& name);
double ci_objective(const std::vector<GaussianD>& gaussians, const Eigen::VectorXd& w, CiCriterion criterion);
WeightResult ci_weights(const std::vector<GaussianD>& gaussians, CiCriterion criterion, int max_iter = 1000,
                        double tol = 1e-9);

}  // namespace fusion
