#pragma once

#include <functional>
#include <string>

#include "fusion/grid_density.hpp"
#include "fusion/pooling.hpp"

namespace fusion {

// Generic f-divergence ∫ q f(p/q). The convention 0·f(0/0) = 0 applies where both vanish.
double f_divergence(const GridDensity& p, const GridDensity& q, const std::function<double(double)>& f);

double kl(const GridDensity& p, const GridDensity& q);
double reverse_kl(const GridDensity& p, const GridDensity& q);
// D_α(p‖q) = 1/(α(α−1)) ∫ q ((p/q)^α − 1), α ∉ {0, 1}.
double alpha_div(const GridDensity& p, const GridDensity& q, double alpha);
double reverse_alpha_div(const GridDensity& p, const GridDensity& q, double alpha);
double pearson_chi2(const GridDensity& p, const GridDensity& q);
double l2(const GridDensity& p, const GridDensity& q);
// Same distances on raw node values; the arguments need not be normalized.
double l2(const Grid& grid, const Eigen::ArrayXd& p, const Eigen::ArrayXd& q);
double chi_distance(const GridDensity& p, const GridDensity& q, const Chi& chi);
double chi_distance(const Grid& grid, const Eigen::ArrayXd& p, const Eigen::ArrayXd& q, const Chi& chi);
// −∫ p log q and −∫ p log p.
double cross_entropy(const GridDensity& p, const GridDensity& q);
double entropy(const GridDensity& p);

struct DivergenceSpec {
  enum class Kind { KL, ReverseKL, Alpha, ReverseAlpha, PearsonChi2, L2, ChiDistance };
  Kind kind = Kind::KL;
  double alpha = 0.5;
  Chi chi;
};

DivergenceSpec::Kind parse_divergence_kind(const std::string& name);
double divergence(const GridDensity& p, const GridDensity& q, const DivergenceSpec& spec);

}  // namespace fusion
