#include "fusion/gaussian.hpp"

#include <cstdlib>
#include <string>

namespace fusion {

GridDensity to_grid(const GaussianD& g, std::vector<double> lower, std::vector<double> upper,
                    std::vector<Eigen::Index> shape) {
  if (g.dim() > 2) throw DimensionError("grids support Gaussians of dimension 1 or 2");
  if (static_cast<Eigen::Index>(shape.size()) != g.dim())
    throw DimensionError("grid dimension must match the Gaussian dimension");
  const Grid grid(std::move(lower), std::move(upper), std::move(shape));
  const Eigen::Index n = grid.size();
  Eigen::ArrayXd values(n);
  Eigen::MatrixXd x(g.dim(), n);
  for (int d = 0; d < g.dim(); ++d) x.row(d) = grid.coordinates(d).matrix().transpose();
  for (Eigen::Index i = 0; i < n; ++i) values(i) = eval(g, x.col(i));
  if ((values == 0.0).all()) throw DegenerateError("Gaussian has no mass on the requested grid");
  return normalize(GridDensity::from_values(grid, std::move(values)));
}

GridDensity to_grid(const GaussianD& g, std::optional<Eigen::Index> points) {
  if (g.dim() > 2) throw DimensionError("grids support Gaussians of dimension 1 or 2");
  const Eigen::Index n = points.value_or(g.dim() == 1 ? default_grid_points_1d() : kDefaultGridPoints2d);
  std::vector<double> lo, hi;
  std::vector<Eigen::Index> shape;
  for (int d = 0; d < g.dim(); ++d) {
    const double s = std::sqrt(g.cov()(d, d));
    lo.push_back(g.mean()(d) - kGaussianGridSigmas * s);
    hi.push_back(g.mean()(d) + kGaussianGridSigmas * s);
    shape.push_back(n);
  }
  return to_grid(g, std::move(lo), std::move(hi), std::move(shape));
}

Eigen::Index default_grid_points_1d() {
  if (const char* env = std::getenv("FUSION_GRID_POINTS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 16) throw ValueError("FUSION_GRID_POINTS must be an integer of at least 16");
    return static_cast<Eigen::Index>(v);
  }
  return 2048;
}

}  // namespace fusion
