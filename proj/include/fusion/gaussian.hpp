#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "fusion/errors.hpp"
#include "fusion/grid_density.hpp"
#include "fusion/simplex.hpp"

namespace fusion {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
MatrixX<Scalar> symmetrize(const MatrixX<Scalar>& a) {
  return (a + a.transpose()) / Scalar(2);
}

// Inverse of a symmetric positive definite matrix via Cholesky.
template <typename Scalar>
MatrixX<Scalar> spd_inverse(const MatrixX<Scalar>& a, const char* what = "matrix") {
  Eigen::LLT<MatrixX<Scalar>> llt(symmetrize<Scalar>(a));
  if (llt.info() != Eigen::Success) throw SingularityError(std::string(what) + " is not positive definite");
  return symmetrize<Scalar>(llt.solve(MatrixX<Scalar>::Identity(a.rows(), a.cols())));
}

template <typename Scalar>
bool is_positive_definite(const MatrixX<Scalar>& a) {
  Eigen::LLT<MatrixX<Scalar>> llt(symmetrize<Scalar>(a));
  return llt.info() == Eigen::Success;
}

template <typename Scalar>
class Gaussian {
 public:
  Gaussian(VectorX<Scalar> mean, MatrixX<Scalar> cov) : mean_(std::move(mean)) {
    if (mean_.size() == 0 || cov.rows() != mean_.size() || cov.cols() != mean_.size())
      throw DimensionError("covariance must be square and match the mean dimension");
    if (!mean_.allFinite() || !cov.allFinite()) throw ValueError("Gaussian parameters must be finite");
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-10) * std::max(Scalar(1), cov.cwiseAbs().maxCoeff()))
      throw ValueError("covariance is not symmetric");
    cov_ = symmetrize<Scalar>(cov);
    llt_.compute(cov_);
    if (llt_.info() != Eigen::Success) throw ValueError("covariance is not positive definite");
  }

  Eigen::Index dim() const { return mean_.size(); }
  const VectorX<Scalar>& mean() const { return mean_; }
  const MatrixX<Scalar>& cov() const { return cov_; }
  MatrixX<Scalar> precision() const { return llt_.solve(MatrixX<Scalar>::Identity(dim(), dim())); }
  Scalar log_det_cov() const {
    return Scalar(2) * llt_.matrixL().toDenseMatrix().diagonal().array().log().sum();
  }
  const Eigen::LLT<MatrixX<Scalar>>& llt() const { return llt_; }

 private:
  VectorX<Scalar> mean_;
  MatrixX<Scalar> cov_;
  Eigen::LLT<MatrixX<Scalar>> llt_;
};

using GaussianD = Gaussian<double>;

template <typename Scalar, typename Derived>
Scalar log_eval(const Gaussian<Scalar>& g, const Eigen::MatrixBase<Derived>& theta) {
  if (theta.size() != g.dim()) throw DimensionError("evaluation point has the wrong dimension");
  const VectorX<Scalar> z = g.llt().matrixL().solve(VectorX<Scalar>(theta) - g.mean());
  const Scalar d = static_cast<Scalar>(g.dim());
  return Scalar(-0.5) * (z.squaredNorm() + d * std::log(Scalar(2) * std::numbers::pi_v<Scalar>) + g.log_det_cov());
}

template <typename Scalar, typename Derived>
Scalar eval(const Gaussian<Scalar>& g, const Eigen::MatrixBase<Derived>& theta) {
  return std::exp(log_eval(g, theta));
}

template <typename Scalar>
Scalar eval(const Gaussian<Scalar>& g, Scalar theta) {
  return eval(g, VectorX<Scalar>::Constant(1, theta));
}

template <typename Scalar>
struct GaussianMoments {
  VectorX<Scalar> mean;
  MatrixX<Scalar> cov;
};

namespace detail {
template <typename Scalar, typename Derived>
void check_family(const std::vector<Gaussian<Scalar>>& gs, const Eigen::MatrixBase<Derived>& w) {
  if (gs.empty()) throw ValueError("at least one Gaussian is required");
  if (w.size() != static_cast<Eigen::Index>(gs.size())) throw DimensionError("one weight per Gaussian is required");
  require_simplex(w);
  for (const auto& g : gs)
    if (g.dim() != gs.front().dim()) throw DimensionError("Gaussians must share a dimension");
}
}  // namespace detail

// Mean and covariance of the linear pool of Gaussians.
template <typename Scalar, typename Derived>
GaussianMoments<Scalar> mixture_moments(const std::vector<Gaussian<Scalar>>& gs, const Eigen::MatrixBase<Derived>& w) {
  detail::check_family(gs, w);
  const Eigen::Index d = gs.front().dim();
  VectorX<Scalar> mu = VectorX<Scalar>::Zero(d);
  for (std::size_t k = 0; k < gs.size(); ++k) mu += w(k) * gs[k].mean();
  MatrixX<Scalar> cov = MatrixX<Scalar>::Zero(d, d);
  for (std::size_t k = 0; k < gs.size(); ++k) {
    const VectorX<Scalar> dm = gs[k].mean() - mu;
    cov += w(k) * (gs[k].cov() + dm * dm.transpose());
  }
  return {mu, symmetrize<Scalar>(cov)};
}

// Log-linear pool of Gaussians (covariance intersection form).
template <typename Scalar, typename Derived>
Gaussian<Scalar> ci_fuse(const std::vector<Gaussian<Scalar>>& gs, const Eigen::MatrixBase<Derived>& w) {
  detail::check_family(gs, w);
  for (std::size_t k = 0; k < gs.size(); ++k)
    if (w(k) == Scalar(1)) return gs[k];
  const Eigen::Index d = gs.front().dim();
  MatrixX<Scalar> info = MatrixX<Scalar>::Zero(d, d);
  VectorX<Scalar> eta = VectorX<Scalar>::Zero(d);
  for (std::size_t k = 0; k < gs.size(); ++k) {
    if (w(k) == Scalar(0)) continue;
    const MatrixX<Scalar> p = gs[k].precision();
    info += w(k) * p;
    eta += w(k) * (p * gs[k].mean());
  }
  const MatrixX<Scalar> cov = spd_inverse<Scalar>(info, "combined precision");
  return Gaussian<Scalar>(cov * eta, cov);
}

// Samples g on a grid and renormalizes to absorb truncation.
GridDensity to_grid(const GaussianD& g, std::vector<double> lower, std::vector<double> upper,
                    std::vector<Eigen::Index> shape);
// Grid over mean ± 8 marginal standard deviations.
GridDensity to_grid(const GaussianD& g, std::optional<Eigen::Index> points = std::nullopt);

// 1-D grid size: FUSION_GRID_POINTS when set, otherwise 2048.
Eigen::Index default_grid_points_1d();
inline constexpr Eigen::Index kDefaultGridPoints2d = 257;
inline constexpr double kGaussianGridSigmas = 8.0;

}  // namespace fusion
