#include "fusion/pooling.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "fusion/errors.hpp"
#include "fusion/simplex.hpp"

namespace fusion {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_weight_count(const OpinionProfile& profile, const Eigen::VectorXd& w) {
  if (static_cast<std::size_t>(w.size()) != profile.size())
    throw DimensionError("expected " + std::to_string(profile.size()) + " weights, got " + std::to_string(w.size()));
}

void require_simplex_weights(const OpinionProfile& profile, const Eigen::VectorXd& w) {
  require_weight_count(profile, w);
  require_simplex(w);
}

void require_positive(const OpinionProfile& profile, const char* what) {
  if (!profile.positive()) throw PositivityError(std::string(what) + " requires a positive opinion profile");
}

void require_grid(const OpinionProfile& profile, const GridDensity& d, const char* what) {
  if (profile.grid() != d.grid()) throw GridMismatchError(std::string(what) + " is not on the profile grid");
}

GridDensity finish(const Grid& grid, Eigen::ArrayXd values) {
  const double mass = integrate(grid, values);
  if (!std::isfinite(mass) || !(mass > 0.0) || (values == 0.0).all())
    throw DegenerateError("fused values have no finite positive normalizer");
  return normalize(GridDensity::from_values(grid, std::move(values)));
}

// exp(logv − max logv) then normalize; −inf entries map to exact zeros.
GridDensity finish_log(const Grid& grid, const Eigen::ArrayXd& logv) {
  if (logv.isNaN().any()) throw DegenerateError("fused log-values are undefined");
  const double m = logv.maxCoeff();
  if (!std::isfinite(m)) throw DegenerateError("fused values have no finite positive normalizer");
  return finish(grid, (logv - m).exp());
}

Eigen::ArrayXd weighted_log_sum(const OpinionProfile& profile, const Eigen::VectorXd& w) {
  Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(profile.grid().size());
  for (std::size_t k = 0; k < profile.size(); ++k)
    if (w(k) != 0.0) acc += w(k) * profile[k].values().log();
  return acc;
}

}  // namespace

std::string to_string(PoolingKind kind) {
  switch (kind) {
    case PoolingKind::Linear: return "linear";
    case PoolingKind::GeneralizedLinear: return "generalized-linear";
    case PoolingKind::LogLinear: return "log-linear";
    case PoolingKind::GeneralizedLogLinear: return "generalized-log-linear";
    case PoolingKind::Holder: return "holder";
    case PoolingKind::InverseLinear: return "inverse-linear";
    case PoolingKind::Multiplicative: return "multiplicative";
    case PoolingKind::GeneralizedMultiplicative: return "generalized-multiplicative";
    case PoolingKind::Dictatorship: return "dictatorship";
    case PoolingKind::Dogmatic: return "dogmatic";
    case PoolingKind::ChiTransform: return "chi-transform";
  }
  return "unknown";
}

PoolingKind parse_pooling_kind(const std::string& name) {
  for (auto k : {PoolingKind::Linear, PoolingKind::GeneralizedLinear, PoolingKind::LogLinear,
                 PoolingKind::GeneralizedLogLinear, PoolingKind::Holder, PoolingKind::InverseLinear,
                 PoolingKind::Multiplicative, PoolingKind::GeneralizedMultiplicative, PoolingKind::Dictatorship,
                 PoolingKind::Dogmatic, PoolingKind::ChiTransform})
    if (to_string(k) == name) return k;
  throw ValueError("unknown pooling kind '" + name + "'");
}

Chi Chi::pow(double a) {
  if (!std::isfinite(a) || a == 0.0) throw ValueError("power transform needs a finite nonzero exponent");
  return {Kind::Power, a};
}

bool Chi::needs_positive() const {
  return kind == Kind::Log || kind == Kind::Reciprocal || (kind == Kind::Power && power < 0.0);
}

Eigen::ArrayXd Chi::apply(const Eigen::ArrayXd& x) const {
  switch (kind) {
    case Kind::Identity: return x;
    case Kind::Log: return x.log();
    case Kind::Reciprocal: return x.inverse();
    case Kind::Power: return x.pow(power);
  }
  return x;
}

Eigen::ArrayXd Chi::inverse(const Eigen::ArrayXd& y) const {
  switch (kind) {
    case Kind::Identity: return y;
    case Kind::Log: return y.exp();
    case Kind::Reciprocal: return y.inverse();
    case Kind::Power: return y.pow(1.0 / power);
  }
  return y;
}

std::string to_string(const Chi& chi) {
  switch (chi.kind) {
    case Chi::Kind::Identity: return "identity";
    case Chi::Kind::Log: return "log";
    case Chi::Kind::Reciprocal: return "reciprocal";
    case Chi::Kind::Power: {
      std::ostringstream os;
      os.precision(17);
      os << "power:" << chi.power;
      return os.str();
    }
  }
  return "unknown";
}

Chi parse_chi(const std::string& text) {
  if (text == "identity") return Chi::identity();
  if (text == "log") return Chi::log();
  if (text == "reciprocal") return Chi::reciprocal();
  if (text.rfind("power:", 0) == 0) {
    try {
      std::size_t used = 0;
      const std::string num = text.substr(6);
      const double a = std::stod(num, &used);
      if (used == num.size()) return Chi::pow(a);
    } catch (const std::logic_error&) {
    }
  }
  throw ValueError("unknown chi transform '" + text + "'");
}

GridDensity linear_pool(const OpinionProfile& profile, const Eigen::VectorXd& weights) {
  require_simplex_weights(profile, weights);
  Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(profile.grid().size());
  for (std::size_t k = 0; k < profile.size(); ++k)
    if (weights(k) != 0.0) acc += weights(k) * profile[k].values();
  return finish(profile.grid(), std::move(acc));
}

GridDensity generalized_linear_pool(const OpinionProfile& profile, const Eigen::VectorXd& weights,
                                    const GridDensity& q0, double w0) {
  require_weight_count(profile, weights);
  require_grid(profile, q0, "q0");
  Eigen::VectorXd all(weights.size() + 1);
  all << w0, weights;
  require_simplex(all);
  Eigen::ArrayXd acc = w0 * q0.values();
  for (std::size_t k = 0; k < profile.size(); ++k)
    if (weights(k) != 0.0) acc += weights(k) * profile[k].values();
  return finish(profile.grid(), std::move(acc));
}

GridDensity log_linear_pool(const OpinionProfile& profile, const Eigen::VectorXd& weights,
                            const std::optional<Eigen::ArrayXd>& xi0) {
  require_simplex_weights(profile, weights);
  require_positive(profile, "log-linear pooling");
  Eigen::ArrayXd logv = weighted_log_sum(profile, weights);
  if (xi0) {
    if (xi0->size() != profile.grid().size()) throw DimensionError("xi0 must have one value per grid node");
    if (!xi0->isFinite().all() || (*xi0 <= 0.0).any())
      throw PositivityError("xi0 must be strictly positive and bounded");
    logv += xi0->log();
  }
  return finish_log(profile.grid(), logv);
}

GridDensity holder_pool(const OpinionProfile& profile, const Eigen::VectorXd& weights, double alpha) {
  if (!std::isfinite(alpha)) throw ValueError("alpha must be finite");
  if (std::abs(alpha) < kHolderMinAlpha)
    throw ValueError("alpha is too close to 0; use the log-linear pooling kind for the alpha -> 0 limit");
  if (alpha == 1.0) return linear_pool(profile, weights);
  require_simplex_weights(profile, weights);
  if (alpha < 0.0) require_positive(profile, "Holder pooling with negative alpha");
  // log Σ w_k q_k^α evaluated as a log-sum-exp over agents.
  const Eigen::Index n = profile.grid().size();
  Eigen::ArrayXd m = Eigen::ArrayXd::Constant(n, kNegInf);
  std::vector<Eigen::ArrayXd> terms;
  for (std::size_t k = 0; k < profile.size(); ++k) {
    if (weights(k) == 0.0) continue;
    terms.push_back(std::log(weights(k)) + alpha * profile[k].values().log());
    m = m.max(terms.back());
  }
  Eigen::ArrayXd s = Eigen::ArrayXd::Zero(n);
  for (const auto& t : terms) s += (t - m).exp();
  Eigen::ArrayXd logv(n);
  for (Eigen::Index i = 0; i < n; ++i) logv(i) = std::isfinite(m(i)) ? (m(i) + std::log(s(i))) / alpha : kNegInf;
  return finish_log(profile.grid(), logv);
}

GridDensity inverse_linear_pool(const OpinionProfile& profile, const Eigen::VectorXd& weights) {
  return holder_pool(profile, weights, -1.0);
}

GridDensity multiplicative_pool(const OpinionProfile& profile, const GridDensity& q0,
                                const std::optional<Eigen::VectorXd>& weights) {
  const Eigen::VectorXd w = weights.value_or(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(profile.size())));
  require_weight_count(profile, w);
  if (!w.allFinite()) throw ValueError("weights must be finite");
  require_grid(profile, q0, "q0");
  require_positive(profile, "multiplicative pooling");
  if (!q0.positive()) throw PositivityError("the calibrating pdf q0 must be strictly positive");
  const Eigen::ArrayXd log_q0 = q0.values().log();
  // q0^{1−Σw} Π q_k^{w_k} = q0 · Π (q_k/q0)^{w_k}.
  Eigen::ArrayXd logv = log_q0;
  for (std::size_t k = 0; k < profile.size(); ++k) {
    if (w(k) == 0.0) continue;
    const Eigen::ArrayXd log_ratio = w(k) * (profile[k].values().log() - log_q0);
    if (log_ratio.maxCoeff() > kLogOverflowThreshold)
      throw BoundednessError("agent " + std::to_string(k) + " ratio to q0 exceeds the overflow threshold");
    logv += log_ratio;
  }
  return finish_log(profile.grid(), logv);
}

GridDensity dictatorship_pool(const OpinionProfile& profile, std::size_t k) {
  if (k >= profile.size())
    throw IndexError("dictator index " + std::to_string(k) + " out of range for " + std::to_string(profile.size()) +
                     " agents");
  return normalize(profile[k]);
}

GridDensity dogmatic_pool(const OpinionProfile& profile, const GridDensity& q0) {
  require_grid(profile, q0, "q0");
  return normalize(q0);
}

GridDensity bayes_update(const GridDensity& q, const Eigen::ArrayXd& ell) {
  if (ell.size() != q.grid().size()) throw DimensionError("likelihood must have one value per grid node");
  if (!ell.isFinite().all() || (ell < 0.0).any()) throw ValueError("likelihood values must be finite and nonnegative");
  return finish(q.grid(), ell * q.values());
}

Eigen::ArrayXd chi_transform_unnormalized(const OpinionProfile& profile, const Eigen::VectorXd& weights,
                                          const Chi& chi) {
  require_simplex_weights(profile, weights);
  if (chi.needs_positive()) require_positive(profile, "this chi transform");
  if (chi.kind == Chi::Kind::Log) return weighted_log_sum(profile, weights).exp();
  Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(profile.grid().size());
  for (std::size_t k = 0; k < profile.size(); ++k)
    if (weights(k) != 0.0) acc += weights(k) * chi.apply(profile[k].values());
  return chi.inverse(acc);
}

GridDensity chi_transform_pool(const OpinionProfile& profile, const Eigen::VectorXd& weights, const Chi& chi) {
  if (chi.kind == Chi::Kind::Log) {
    require_simplex_weights(profile, weights);
    require_positive(profile, "this chi transform");
    return finish_log(profile.grid(), weighted_log_sum(profile, weights));
  }
  return finish(profile.grid(), chi_transform_unnormalized(profile, weights, chi));
}

GridDensity pool(const OpinionProfile& profile, const PoolingSpec& spec) {
  auto need_q0 = [&]() -> const GridDensity& {
    if (!spec.q0) throw ValueError(to_string(spec.kind) + " pooling needs a calibrating pdf q0");
    return *spec.q0;
  };
  switch (spec.kind) {
    case PoolingKind::Linear: return linear_pool(profile, spec.weights);
    case PoolingKind::GeneralizedLinear: {
      if (spec.weights.size() != static_cast<Eigen::Index>(profile.size()) + 1)
        throw DimensionError("generalized linear pooling needs K+1 weights (w0 first)");
      return generalized_linear_pool(profile, spec.weights.tail(profile.size()), need_q0(), spec.weights(0));
    }
    case PoolingKind::LogLinear: return log_linear_pool(profile, spec.weights);
    case PoolingKind::GeneralizedLogLinear:
      if (!spec.xi0) throw ValueError("generalized log-linear pooling needs xi0");
      return log_linear_pool(profile, spec.weights, spec.xi0);
    case PoolingKind::Holder: return holder_pool(profile, spec.weights, spec.alpha);
    case PoolingKind::InverseLinear: return inverse_linear_pool(profile, spec.weights);
    case PoolingKind::Multiplicative: return multiplicative_pool(profile, need_q0());
    case PoolingKind::GeneralizedMultiplicative: return multiplicative_pool(profile, need_q0(), spec.weights);
    case PoolingKind::Dictatorship:
      if (!spec.dictator) throw ValueError("dictatorship pooling needs a dictator index");
      return dictatorship_pool(profile, *spec.dictator);
    case PoolingKind::Dogmatic: return dogmatic_pool(profile, need_q0());
    case PoolingKind::ChiTransform: return chi_transform_pool(profile, spec.weights, spec.chi);
  }
  throw ValueError("unknown pooling kind");
}

}  // namespace fusion
