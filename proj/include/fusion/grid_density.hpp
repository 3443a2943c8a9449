#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

namespace fusion {

// Rectangular 1-D or 2-D grid of uniformly spaced nodes, endpoints included.
// Flattened node order is row-major: the last dimension varies fastest.
class Grid {
 public:
  Grid(std::vector<double> lower, std::vector<double> upper, std::vector<Eigen::Index> shape);

  int dims() const { return static_cast<int>(shape_.size()); }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<Eigen::Index>& shape() const { return shape_; }
  Eigen::Index size() const;

  double spacing(int d) const;
  double node(int d, Eigen::Index i) const;
  Eigen::VectorXd axis(int d) const;
  // Coordinate along dimension d of every flattened node.
  Eigen::ArrayXd coordinates(int d) const;
  // Composite trapezoid weights; integral = (weights * values).sum().
  const Eigen::ArrayXd& quadrature_weights() const { return *weights_; }

  bool operator==(const Grid& other) const;
  bool operator!=(const Grid& other) const { return !(*this == other); }

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<Eigen::Index> shape_;
  std::shared_ptr<const Eigen::ArrayXd> weights_;
};

class GridDensity {
 public:
  // Validates values (finite, nonnegative, not all zero); normalized=false.
  static GridDensity from_samples(std::vector<double> lower, std::vector<double> upper,
                                  std::vector<Eigen::Index> shape, Eigen::ArrayXd values);
  static GridDensity from_values(const Grid& grid, Eigen::ArrayXd values);

  const Grid& grid() const { return grid_; }
  int dims() const { return grid_.dims(); }
  const Eigen::ArrayXd& values() const { return values_; }
  bool normalized() const { return normalized_; }
  bool positive() const { return values_.minCoeff() > 0.0; }

 private:
  GridDensity(Grid grid, Eigen::ArrayXd values, bool normalized)
      : grid_(std::move(grid)), values_(std::move(values)), normalized_(normalized) {}
  friend GridDensity normalize(const GridDensity& d);

  Grid grid_;
  Eigen::ArrayXd values_;
  bool normalized_;
};

class OpinionProfile {
 public:
  explicit OpinionProfile(std::vector<GridDensity> densities);

  std::size_t size() const { return densities_.size(); }
  const GridDensity& operator[](std::size_t k) const { return densities_[k]; }
  const std::vector<GridDensity>& densities() const { return densities_; }
  const Grid& grid() const { return densities_.front().grid(); }
  bool positive() const { return positive_; }

 private:
  std::vector<GridDensity> densities_;
  bool positive_;
};

struct Moments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

double integrate(const GridDensity& d);
// Integral of raw node values on a grid.
double integrate(const Grid& grid, const Eigen::ArrayXd& values);
GridDensity normalize(const GridDensity& d);
Moments moments(const GridDensity& d);
// E[(θ_d − mean_d)^order] for one dimension.
double central_moment(const GridDensity& d, int dim, int order);

// Union of grid cells; a cell is the box between adjacent nodes.
class CellEvent {
 public:
  // mask has one entry per cell, row-major over (shape[d] − 1) cells per dim.
  CellEvent(const Grid& grid, std::vector<bool> mask);
  // 1-D union of half-open cell ranges [first, last).
  static CellEvent from_ranges(const Grid& grid, const std::vector<std::pair<Eigen::Index, Eigen::Index>>& ranges);
  // Product event A1 × A2 on a 2-D grid from per-axis cell masks.
  static CellEvent product(const Grid& grid, const std::vector<bool>& mask0, const std::vector<bool>& mask1);

  const Grid& grid() const { return grid_; }
  const std::vector<bool>& mask() const { return mask_; }
  CellEvent complement() const;
  CellEvent intersect(const CellEvent& other) const;
  // Quadrature weights restricted to the event cells.
  const Eigen::ArrayXd& node_weights() const { return node_weights_; }

 private:
  Grid grid_;
  std::vector<bool> mask_;
  Eigen::ArrayXd node_weights_;
};

double probability(const GridDensity& d, const CellEvent& event);

// Trapezoid-weighted L1 distance between node-value arrays.
double l1_distance(const Grid& grid, const Eigen::ArrayXd& a, const Eigen::ArrayXd& b);
double l1_distance(const GridDensity& a, const GridDensity& b);

// Interior local maxima of a 1-D density; flat runs count once at their midpoint.
std::vector<double> local_maxima(const GridDensity& d, double rel_flat_tol = 1e-12);

}  // namespace fusion
