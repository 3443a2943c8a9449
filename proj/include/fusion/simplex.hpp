#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "fusion/errors.hpp"

namespace fusion {

inline constexpr double kSimplexTolerance = 1e-9;

template <typename Derived>
bool on_simplex(const Eigen::MatrixBase<Derived>& w, double tol = kSimplexTolerance) {
  return w.size() > 0 && (w.array() >= -tol).all() && std::abs(w.sum() - 1.0) <= tol;
}

template <typename Derived>
void require_simplex(const Eigen::MatrixBase<Derived>& w, const char* what = "weights") {
  if (!w.allFinite() || !on_simplex(w))
    throw SimplexError(std::string(what) + " must be nonnegative and sum to 1");
}

// Euclidean projection onto the probability simplex (sort and threshold).
// Stable sort keeps ties in index order.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> project_to_simplex(
    const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = v.size();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return v(a) > v(b); });
  Scalar cumsum = 0, theta = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    cumsum += v(order[i]);
    const Scalar t = (cumsum - Scalar(1)) / Scalar(i + 1);
    if (v(order[i]) - t > Scalar(0)) theta = t;
  }
  return (v.array() - theta).cwiseMax(Scalar(0)).matrix();
}

}  // namespace fusion
