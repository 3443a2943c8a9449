#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "fusion/errors.hpp"
#include "fusion/gaussian.hpp"
#include "fusion/grid_density.hpp"

namespace fusion {

// y = Hθ + n, n ~ N(0, Σ), θ ~ N(μ0, Σ0), with H stacked from per-agent blocks H_k.
template <typename Scalar>
class LinearGaussianModel {
 public:
  LinearGaussianModel(std::vector<MatrixX<Scalar>> H_blocks, MatrixX<Scalar> Sigma, VectorX<Scalar> prior_mean,
                      MatrixX<Scalar> prior_cov)
      : H_(std::move(H_blocks)), Sigma_(std::move(Sigma)), prior_(std::move(prior_mean), std::move(prior_cov)) {
    if (H_.empty()) throw ValueError("a model needs at least one agent");
    const Eigen::Index dt = prior_.dim();
    Eigen::Index dy = 0;
    for (const auto& h : H_) {
      if (h.cols() != dt) throw DimensionError("every H_k needs one column per parameter");
      if (h.rows() < dt) throw RankError("every agent needs at least as many observations as parameters");
      offsets_.push_back(dy);
      dy += h.rows();
    }
    if (Sigma_.rows() != dy || Sigma_.cols() != dy) throw DimensionError("Sigma must be square of the stacked size");
    if (!Sigma_.allFinite()) throw ValueError("Sigma must be finite");
    const Scalar scale = std::max(Scalar(1), Sigma_.cwiseAbs().maxCoeff());
    if ((Sigma_ - Sigma_.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-10) * scale)
      throw ValueError("Sigma is not symmetric");
    Sigma_ = symmetrize<Scalar>(Sigma_);
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eig(Sigma_, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < Scalar(-1e-10) * scale) throw ValueError("Sigma is not positive semidefinite");
    for (std::size_t k = 0; k < H_.size(); ++k) {
      if (!is_positive_definite<Scalar>(Sigma_block(k, k)))
        throw ValueError("diagonal block " + std::to_string(k) + " of Sigma is not positive definite");
      Eigen::ColPivHouseholderQR<MatrixX<Scalar>> qr(H_[k]);
      if (qr.rank() < dt) throw RankError("H_" + std::to_string(k) + " does not have full column rank");
    }
    sigma_pd_ = is_positive_definite<Scalar>(Sigma_);
  }

  std::size_t K() const { return H_.size(); }
  Eigen::Index dim_theta() const { return prior_.dim(); }
  Eigen::Index dim_y() const { return Sigma_.rows(); }
  Eigen::Index dim_y(std::size_t k) const { return H_[k].rows(); }
  Eigen::Index offset(std::size_t k) const { return offsets_[k]; }
  const std::vector<MatrixX<Scalar>>& H_blocks() const { return H_; }
  MatrixX<Scalar> H() const {
    MatrixX<Scalar> h(dim_y(), dim_theta());
    for (std::size_t k = 0; k < K(); ++k) h.middleRows(offsets_[k], H_[k].rows()) = H_[k];
    return h;
  }
  const MatrixX<Scalar>& Sigma() const { return Sigma_; }
  MatrixX<Scalar> Sigma_block(std::size_t k, std::size_t j) const {
    return Sigma_.block(offsets_[k], offsets_[j], H_[k].rows(), H_[j].rows());
  }
  const Gaussian<Scalar>& prior() const { return prior_; }
  // The oracle posterior exists only for nonsingular Σ.
  bool sigma_positive_definite() const { return sigma_pd_; }

 private:
  std::vector<MatrixX<Scalar>> H_;
  MatrixX<Scalar> Sigma_;
  Gaussian<Scalar> prior_;
  std::vector<Eigen::Index> offsets_;
  bool sigma_pd_ = false;
};

using LinearGaussianModelD = LinearGaussianModel<double>;

template <typename Scalar>
struct LocalOperators {
  std::vector<MatrixX<Scalar>> V;       // V_k = M_k⁻¹ H_kᵀ Σ_kk⁻¹
  std::vector<MatrixX<Scalar>> M;       // M_k = H_kᵀ Σ_kk⁻¹ H_k
};

template <typename Scalar>
LocalOperators<Scalar> local_operators(const LinearGaussianModel<Scalar>& model) {
  LocalOperators<Scalar> ops;
  for (std::size_t k = 0; k < model.K(); ++k) {
    Eigen::LLT<MatrixX<Scalar>> s(model.Sigma_block(k, k));
    const MatrixX<Scalar> a = s.solve(model.H_blocks()[k]);
    const MatrixX<Scalar> m = symmetrize<Scalar>(model.H_blocks()[k].transpose() * a);
    Eigen::LLT<MatrixX<Scalar>> mllt(m);
    if (mllt.info() != Eigen::Success) throw RankError("H_kᵀ Σ_kk⁻¹ H_k is singular for agent " + std::to_string(k));
    ops.V.push_back(mllt.solve(a.transpose()));
    ops.M.push_back(m);
  }
  return ops;
}

// Block-diagonal V = blockdiag(V_1, ..., V_K).
template <typename Scalar>
MatrixX<Scalar> stacked_operator(const LinearGaussianModel<Scalar>& model, const LocalOperators<Scalar>& ops) {
  const Eigen::Index dt = model.dim_theta();
  MatrixX<Scalar> v = MatrixX<Scalar>::Zero(dt * static_cast<Eigen::Index>(model.K()), model.dim_y());
  for (std::size_t k = 0; k < model.K(); ++k)
    v.block(static_cast<Eigen::Index>(k) * dt, model.offset(k), dt, model.dim_y(k)) = ops.V[k];
  return v;
}

// 1_K ⊗ I_dθ.
template <typename Scalar>
MatrixX<Scalar> replicated_identity(std::size_t K, Eigen::Index d) {
  MatrixX<Scalar> j(static_cast<Eigen::Index>(K) * d, d);
  for (std::size_t k = 0; k < K; ++k) j.middleRows(static_cast<Eigen::Index>(k) * d, d).setIdentity();
  return j;
}

template <typename Scalar>
struct LocalStatistics {
  VectorX<Scalar> t;
  std::vector<MatrixX<Scalar>> V_blocks;
};

template <typename Scalar, typename Derived>
LocalStatistics<Scalar> local_statistics(const LinearGaussianModel<Scalar>& model, const Eigen::MatrixBase<Derived>& y) {
  if (y.size() != model.dim_y()) throw DimensionError("observation vector has the wrong length");
  auto ops = local_operators(model);
  const Eigen::Index dt = model.dim_theta();
  VectorX<Scalar> t(dt * static_cast<Eigen::Index>(model.K()));
  for (std::size_t k = 0; k < model.K(); ++k)
    t.segment(static_cast<Eigen::Index>(k) * dt, dt) = ops.V[k] * y.segment(model.offset(k), model.dim_y(k));
  return {t, std::move(ops.V)};
}

template <typename Scalar>
struct GlobalLikelihoodParams {
  MatrixX<Scalar> Sigma_tilde;
  MatrixX<Scalar> Sigma_tilde_inv;
  MatrixX<Scalar> Sigma_hat_inv;
};

template <typename Scalar>
GlobalLikelihoodParams<Scalar> global_likelihood_params(const LinearGaussianModel<Scalar>& model,
                                                        const LocalOperators<Scalar>& ops) {
  const MatrixX<Scalar> v = stacked_operator(model, ops);
  GlobalLikelihoodParams<Scalar> p;
  p.Sigma_tilde = symmetrize<Scalar>(v * model.Sigma() * v.transpose());
  p.Sigma_tilde_inv = spd_inverse<Scalar>(p.Sigma_tilde, "Sigma_tilde");
  const MatrixX<Scalar> j = replicated_identity<Scalar>(model.K(), model.dim_theta());
  p.Sigma_hat_inv = symmetrize<Scalar>(j.transpose() * p.Sigma_tilde_inv * j);
  return p;
}

template <typename Scalar>
GlobalLikelihoodParams<Scalar> global_likelihood_params(const LinearGaussianModel<Scalar>& model) {
  return global_likelihood_params(model, local_operators(model));
}

template <typename Scalar>
struct SupraFusionResult {
  Gaussian<Scalar> posterior;
  std::optional<Gaussian<Scalar>> oracle;
  std::optional<VectorX<Scalar>> scalar_weights;
  std::optional<std::vector<MatrixX<Scalar>>> vector_weights;
  MatrixX<Scalar> Sigma_tilde;
  MatrixX<Scalar> Sigma_hat_inv;
  std::optional<MatrixX<Scalar>> G;
};

// Posterior from the full observation vector with precision matrix P standing in for Σ⁻¹.
template <typename Scalar, typename Derived>
Gaussian<Scalar> posterior_with_precision(const LinearGaussianModel<Scalar>& model, const MatrixX<Scalar>& P,
                                          const Eigen::MatrixBase<Derived>& y) {
  const MatrixX<Scalar> h = model.H();
  const MatrixX<Scalar> p0 = model.prior().precision();
  const MatrixX<Scalar> cov = spd_inverse<Scalar>(h.transpose() * P * h + p0, "posterior precision");
  const VectorX<Scalar> mean = cov * (h.transpose() * P * VectorX<Scalar>(y) + p0 * model.prior().mean());
  return Gaussian<Scalar>(mean, cov);
}

// Posterior given all raw observations; requires Σ positive definite.
template <typename Scalar, typename Derived>
Gaussian<Scalar> oracle_posterior(const LinearGaussianModel<Scalar>& model, const Eigen::MatrixBase<Derived>& y) {
  if (!model.sigma_positive_definite()) throw SingularityError("the oracle posterior needs a nonsingular Sigma");
  if (y.size() != model.dim_y()) throw DimensionError("observation vector has the wrong length");
  return posterior_with_precision(model, spd_inverse<Scalar>(model.Sigma(), "Sigma"), y);
}

// Oracle formulas with Σ⁻¹ replaced by Vᵀ(VΣVᵀ)⁻¹V.
template <typename Scalar, typename Derived>
Gaussian<Scalar> substituted_oracle(const LinearGaussianModel<Scalar>& model, const Eigen::MatrixBase<Derived>& y) {
  if (y.size() != model.dim_y()) throw DimensionError("observation vector has the wrong length");
  const auto ops = local_operators(model);
  const MatrixX<Scalar> v = stacked_operator(model, ops);
  const auto g = global_likelihood_params(model, ops);
  return posterior_with_precision(model, MatrixX<Scalar>(v.transpose() * g.Sigma_tilde_inv * v), y);
}

namespace detail {
template <typename Scalar>
void check_t(const LinearGaussianModel<Scalar>& model, Eigen::Index n) {
  if (n != model.dim_theta() * static_cast<Eigen::Index>(model.K()))
    throw DimensionError("local statistic vector has the wrong length");
}
template <typename Scalar>
std::optional<Gaussian<Scalar>> maybe_oracle(const LinearGaussianModel<Scalar>& model,
                                             const std::optional<VectorX<Scalar>>& y) {
  if (!y || !model.sigma_positive_definite()) return std::nullopt;
  return oracle_posterior(model, *y);
}
}  // namespace detail

template <typename Scalar>
SupraFusionResult<Scalar> vector_fusion(const LinearGaussianModel<Scalar>& model, const VectorX<Scalar>& t,
                                        const std::optional<VectorX<Scalar>>& y = std::nullopt) {
  detail::check_t(model, t.size());
  const auto ops = local_operators(model);
  const auto g = global_likelihood_params(model, ops);
  const Eigen::Index dt = model.dim_theta();
  const MatrixX<Scalar> j = replicated_identity<Scalar>(model.K(), dt);
  const MatrixX<Scalar> stj = g.Sigma_tilde_inv * j;
  std::vector<MatrixX<Scalar>> w;
  MatrixX<Scalar> gm = g.Sigma_hat_inv;
  for (std::size_t k = 0; k < model.K(); ++k) {
    const Eigen::LLT<MatrixX<Scalar>> mllt(ops.M[k]);
    w.push_back(mllt.solve(stj.middleRows(static_cast<Eigen::Index>(k) * dt, dt)));
    gm -= w.back().transpose() * ops.M[k] * w.back();
  }
  const MatrixX<Scalar> p0 = model.prior().precision();
  const MatrixX<Scalar> cov = spd_inverse<Scalar>(g.Sigma_hat_inv + p0, "posterior precision");
  const VectorX<Scalar> mean = cov * (j.transpose() * g.Sigma_tilde_inv * t + p0 * model.prior().mean());
  SupraFusionResult<Scalar> r{Gaussian<Scalar>(mean, cov), detail::maybe_oracle(model, y), std::nullopt,
                              std::move(w), g.Sigma_tilde, g.Sigma_hat_inv, symmetrize<Scalar>(gm)};
  return r;
}

template <typename Scalar>
SupraFusionResult<Scalar> scalar_fusion(const LinearGaussianModel<Scalar>& model, const VectorX<Scalar>& t,
                                        const std::optional<VectorX<Scalar>>& y = std::nullopt) {
  if (model.dim_theta() != 1) throw DimensionError("scalar fusion needs a scalar parameter");
  detail::check_t(model, t.size());
  const auto ops = local_operators(model);
  const auto g = global_likelihood_params(model, ops);
  const VectorX<Scalar> s1 = g.Sigma_tilde_inv * VectorX<Scalar>::Ones(t.size());
  VectorX<Scalar> w(t.size());
  for (Eigen::Index k = 0; k < t.size(); ++k) w(k) = s1(k) / ops.M[k](0, 0);
  const Scalar hat_var = Scalar(1) / s1.sum();
  const Scalar var0 = model.prior().cov()(0, 0);
  const Scalar var1 = hat_var * var0 / (hat_var + var0);
  const Scalar mu1 = var1 * s1.dot(t) + hat_var / (hat_var + var0) * model.prior().mean()(0);
  SupraFusionResult<Scalar> r{Gaussian<Scalar>(VectorX<Scalar>::Constant(1, mu1), MatrixX<Scalar>::Constant(1, 1, var1)),
                              detail::maybe_oracle(model, y), w, std::nullopt, g.Sigma_tilde, g.Sigma_hat_inv,
                              std::nullopt};
  return r;
}

// log N(t; (1⊗I)θ, Σ̃) up to a θ-independent constant.
template <typename Scalar, typename Derived>
Scalar global_log_likelihood(const GlobalLikelihoodParams<Scalar>& g, const VectorX<Scalar>& t,
                             const Eigen::MatrixBase<Derived>& theta) {
  const Eigen::Index d = theta.size();
  const VectorX<Scalar> r = t - replicated_identity<Scalar>(static_cast<std::size_t>(t.size() / d), d) * theta;
  return Scalar(-0.5) * r.dot(g.Sigma_tilde_inv * r);
}

// log ξ0(θ) + Σ_k log ℓ_k(W_k θ) up to a θ-independent constant, ℓ_k(θ) = N(y_k; H_k θ, Σ_kk).
template <typename Scalar, typename Derived>
Scalar vector_rule_log_likelihood(const LinearGaussianModel<Scalar>& model, const SupraFusionResult<Scalar>& r,
                                  const VectorX<Scalar>& y, const Eigen::MatrixBase<Derived>& theta) {
  if (!r.vector_weights || !r.G) throw ValueError("result does not carry vector weights");
  Scalar acc = Scalar(-0.5) * theta.dot(*r.G * theta);
  for (std::size_t k = 0; k < model.K(); ++k) {
    const VectorX<Scalar> res = y.segment(model.offset(k), model.dim_y(k)) - model.H_blocks()[k] * ((*r.vector_weights)[k] * theta);
    Eigen::LLT<MatrixX<Scalar>> s(model.Sigma_block(k, k));
    acc += Scalar(-0.5) * res.dot(s.solve(res));
  }
  return acc;
}

// Example 3: agents share r0 observations and hold r_k private ones, scalar θ, unit noise.
template <typename Scalar = double>
LinearGaussianModel<Scalar> private_shared_model(std::size_t K, int r0, const std::vector<int>& r,
                                                 Scalar prior_mean = 0, Scalar prior_var = 1) {
  if (r.size() != K) throw DimensionError("need one private count per agent");
  if (r0 < 0) throw ValueError("shared count must be nonnegative");
  std::vector<MatrixX<Scalar>> h;
  std::vector<Eigen::Index> off;
  Eigen::Index n = 0;
  for (int rk : r) {
    if (rk <= 0) throw ValueError("private counts must be positive");
    h.push_back(MatrixX<Scalar>::Ones(r0 + rk, 1));
    off.push_back(n);
    n += r0 + rk;
  }
  MatrixX<Scalar> sigma = MatrixX<Scalar>::Zero(n, n);
  for (std::size_t k = 0; k < K; ++k) {
    sigma.block(off[k], off[k], r0 + r[k], r0 + r[k]).setIdentity();
    for (std::size_t j = 0; j < K; ++j)
      if (j != k) sigma.block(off[k], off[j], r0, r0).setIdentity();
  }
  return LinearGaussianModel<Scalar>(std::move(h), std::move(sigma), VectorX<Scalar>::Constant(1, prior_mean),
                                     MatrixX<Scalar>::Constant(1, 1, prior_var));
}

// Closed-form Example 3 weights w_k = 1 − (K−1)/r_k · (Σ_{k'=0..K} 1/r_k')⁻¹.
template <typename Scalar = double>
VectorX<Scalar> private_shared_weights(std::size_t K, int r0, const std::vector<int>& r) {
  if (r.size() != K) throw DimensionError("need one private count per agent");
  if (r0 < 0) throw ValueError("shared count must be nonnegative");
  for (int rk : r)
    if (rk <= 0) throw ValueError("private counts must be positive");
  VectorX<Scalar> w = VectorX<Scalar>::Ones(static_cast<Eigen::Index>(K));
  if (r0 == 0) return w;
  Scalar s = Scalar(1) / Scalar(r0);
  for (int rk : r) s += Scalar(1) / Scalar(rk);
  for (std::size_t k = 0; k < K; ++k) w(k) = Scalar(1) - Scalar(K - 1) / Scalar(r[k]) / s;
  return w;
}

template <typename Scalar>
VectorX<Scalar> expfam_fuse_statistics(const std::vector<VectorX<Scalar>>& t_list, const VectorX<Scalar>& t0) {
  VectorX<Scalar> acc = t0;
  for (const auto& t : t_list) {
    if (t.size() != t0.size()) throw DimensionError("statistics must share a length");
    acc += t;
  }
  return acc;
}

// normalize(p^{1−Σw} Π π_k^{w_k}); weights default to all ones.
GridDensity multiplicative_posterior_fusion(const GridDensity& prior, const OpinionProfile& posteriors,
                                            const std::optional<Eigen::VectorXd>& weights = std::nullopt);

}  // namespace fusion
