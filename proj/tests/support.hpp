#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "fusion/grid_density.hpp"
#include "fusion/supra_bayes.hpp"

namespace fusion::test {

inline double normal_pdf(double x, double mu, double var) {
  return std::exp(-0.5 * (x - mu) * (x - mu) / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

// Samples N(mu, var) at the nodes of a 1-D grid and normalizes.
inline GridDensity normal_on(const Grid& g, double mu, double var) {
  const Eigen::ArrayXd x = g.coordinates(0);
  return normalize(GridDensity::from_values(g, x.unaryExpr([&](double t) { return normal_pdf(t, mu, var); })));
}

inline Grid line(double lo, double hi, Eigen::Index n) { return Grid({lo}, {hi}, {n}); }

// Strictly positive random 1-D density: mixture of two Gaussians plus a small floor.
inline GridDensity random_positive(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mu(g.lower()[0] * 0.5, g.upper()[0] * 0.5), sd(0.5, 2.0), wt(0.2, 1.0);
  const Eigen::ArrayXd x = g.coordinates(0);
  Eigen::ArrayXd v = Eigen::ArrayXd::Constant(x.size(), 1e-3);
  for (int c = 0; c < 2; ++c) {
    const double m = mu(rng), s = sd(rng), a = wt(rng);
    v += a * x.unaryExpr([&](double t) { return normal_pdf(t, m, s * s); });
  }
  return normalize(GridDensity::from_values(g, v));
}

inline Eigen::VectorXd random_simplex(Eigen::Index k, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  Eigen::VectorXd w(k);
  for (Eigen::Index i = 0; i < k; ++i) w(i) = e(rng);
  return w / w.sum();
}

inline Eigen::MatrixXd random_spd(Eigen::Index n, std::mt19937_64& rng, double ridge = 0.5) {
  std::normal_distribution<double> z(0.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = z(rng);
  return a * a.transpose() / static_cast<double>(n) + ridge * Eigen::MatrixXd::Identity(n, n);
}

inline Eigen::MatrixXd random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> z(0.0, 1.0);
  Eigen::MatrixXd a(r, c);
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = z(rng);
  return a;
}

// Random linear Gaussian model; correlated Σ when block_diagonal is false.
inline LinearGaussianModelD random_model(std::mt19937_64& rng, Eigen::Index dtheta, std::size_t K, bool block_diagonal) {
  std::uniform_int_distribution<int> extra(0, 2);
  std::vector<Eigen::MatrixXd> h;
  std::vector<Eigen::Index> dims;
  Eigen::Index n = 0;
  for (std::size_t k = 0; k < K; ++k) {
    const Eigen::Index dk = dtheta + extra(rng);
    h.push_back(random_matrix(dk, dtheta, rng));
    dims.push_back(dk);
    n += dk;
  }
  Eigen::MatrixXd sigma = random_spd(n, rng);
  if (block_diagonal) {
    Eigen::MatrixXd bd = Eigen::MatrixXd::Zero(n, n);
    Eigen::Index o = 0;
    for (auto dk : dims) {
      bd.block(o, o, dk, dk) = sigma.block(o, o, dk, dk);
      o += dk;
    }
    sigma = bd;
  }
  std::normal_distribution<double> z(0.0, 1.0);
  Eigen::VectorXd mu0(dtheta);
  for (Eigen::Index i = 0; i < dtheta; ++i) mu0(i) = z(rng);
  return LinearGaussianModelD(std::move(h), std::move(sigma), mu0, random_spd(dtheta, rng, 1.0));
}

inline Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng) { return random_matrix(n, 1, rng); }

}  // namespace fusion::test

#include "fusion/pooling.hpp"

namespace fusion::test {

// Representative spec per table kind with K = 3; equal selects the equal-agent-weight variant.
inline PoolingSpec table_spec(PoolingKind kind, bool equal) {
  PoolingSpec s;
  s.kind = kind;
  s.weights = equal ? Eigen::Vector3d::Constant(1.0 / 3.0) : Eigen::Vector3d(0.2, 0.3, 0.5);
  switch (kind) {
    case PoolingKind::GeneralizedLinear:
      s.weights = equal ? Eigen::Vector4d(0.4, 0.2, 0.2, 0.2) : Eigen::Vector4d(0.1, 0.2, 0.3, 0.4);
      break;
    case PoolingKind::Holder:
      s.alpha = 0.5;
      break;
    case PoolingKind::Multiplicative:
      s.weights = Eigen::VectorXd();
      break;
    case PoolingKind::GeneralizedMultiplicative:
      s.weights = equal ? Eigen::Vector3d::Constant(0.6) : Eigen::Vector3d(0.7, -0.2, 0.9);
      break;
    case PoolingKind::Dictatorship:
      s.dictator = 1;
      break;
    default:
      break;
  }
  return s;
}

}  // namespace fusion::test
