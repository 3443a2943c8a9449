#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "fusion/grid_density.hpp"

namespace fusion {

enum class PoolingKind {
  Linear,
  GeneralizedLinear,
  LogLinear,
  GeneralizedLogLinear,
  Holder,
  InverseLinear,
  Multiplicative,
  GeneralizedMultiplicative,
  Dictatorship,
  Dogmatic,
  ChiTransform,
};

inline constexpr PoolingKind kTableKinds[] = {
    PoolingKind::Linear,         PoolingKind::GeneralizedLinear,         PoolingKind::LogLinear,
    PoolingKind::GeneralizedLogLinear, PoolingKind::Holder,              PoolingKind::InverseLinear,
    PoolingKind::Multiplicative, PoolingKind::GeneralizedMultiplicative, PoolingKind::Dictatorship,
    PoolingKind::Dogmatic,
};

std::string to_string(PoolingKind kind);
PoolingKind parse_pooling_kind(const std::string& name);

// Pointwise transform χ with inverse, used by chi_transform_pool and chi_distance.
struct Chi {
  enum class Kind { Identity, Log, Reciprocal, Power };
  Kind kind = Kind::Identity;
  double power = 1.0;

  static Chi identity() { return {}; }
  static Chi log() { return {Kind::Log, 0.0}; }
  static Chi reciprocal() { return {Kind::Reciprocal, -1.0}; }
  static Chi pow(double a);

  // True when the transform needs strictly positive arguments.
  bool needs_positive() const;
  Eigen::ArrayXd apply(const Eigen::ArrayXd& x) const;
  Eigen::ArrayXd inverse(const Eigen::ArrayXd& y) const;
};

std::string to_string(const Chi& chi);
// "identity", "log", "reciprocal" or "power:<a>".
Chi parse_chi(const std::string& text);

struct PoolingSpec {
  PoolingKind kind = PoolingKind::Linear;
  // GeneralizedLinear: (w0, w1, ..., wK). Multiplicative: ignored (all ones).
  Eigen::VectorXd weights;
  double alpha = 1.0;
  std::optional<GridDensity> q0;
  std::optional<Eigen::ArrayXd> xi0;
  // Zero-based agent index.
  std::optional<std::size_t> dictator;
  Chi chi;
};

GridDensity pool(const OpinionProfile& profile, const PoolingSpec& spec);

GridDensity linear_pool(const OpinionProfile& profile, const Eigen::VectorXd& weights);
GridDensity generalized_linear_pool(const OpinionProfile& profile, const Eigen::VectorXd& weights,
                                    const GridDensity& q0, double w0);
GridDensity log_linear_pool(const OpinionProfile& profile, const Eigen::VectorXd& weights,
                            const std::optional<Eigen::ArrayXd>& xi0 = std::nullopt);
GridDensity holder_pool(const OpinionProfile& profile, const Eigen::VectorXd& weights, double alpha);
GridDensity inverse_linear_pool(const OpinionProfile& profile, const Eigen::VectorXd& weights);
// Weights default to all ones (plain multiplicative pooling).
GridDensity multiplicative_pool(const OpinionProfile& profile, const GridDensity& q0,
                                const std::optional<Eigen::VectorXd>& weights = std::nullopt);
GridDensity dictatorship_pool(const OpinionProfile& profile, std::size_t k);
GridDensity dogmatic_pool(const OpinionProfile& profile, const GridDensity& q0);
GridDensity bayes_update(const GridDensity& q, const Eigen::ArrayXd& ell);
GridDensity chi_transform_pool(const OpinionProfile& profile, const Eigen::VectorXd& weights, const Chi& chi);
// χ⁻¹(Σ w_k χ(q_k)) before normalization.
Eigen::ArrayXd chi_transform_unnormalized(const OpinionProfile& profile, const Eigen::VectorXd& weights,
                                          const Chi& chi);

inline constexpr double kLogOverflowThreshold = 700.0;
inline constexpr double kHolderMinAlpha = 1e-6;

}  // namespace fusion
