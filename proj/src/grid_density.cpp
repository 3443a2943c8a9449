#include "fusion/grid_density.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fusion/errors.hpp"

namespace fusion {

namespace {

Eigen::ArrayXd trapezoid_1d(Eigen::Index n, double h) {
  Eigen::ArrayXd w = Eigen::ArrayXd::Constant(n, h);
  w(0) = w(n - 1) = 0.5 * h;
  return w;
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (a != b) throw GridMismatchError("densities are defined on different grids");
}

}  // namespace

Grid::Grid(std::vector<double> lower, std::vector<double> upper, std::vector<Eigen::Index> shape)
    : lower_(std::move(lower)), upper_(std::move(upper)), shape_(std::move(shape)) {
  if (shape_.empty() || shape_.size() > 2)
    throw DimensionError("grids support 1 or 2 dimensions, got " + std::to_string(shape_.size()));
  if (lower_.size() != shape_.size() || upper_.size() != shape_.size())
    throw DimensionError("lower, upper and shape must have equal lengths");
  for (std::size_t d = 0; d < shape_.size(); ++d) {
    if (!std::isfinite(lower_[d]) || !std::isfinite(upper_[d]) || !(upper_[d] > lower_[d]))
      throw DomainError("upper must exceed lower in dimension " + std::to_string(d));
    if (shape_[d] < 16)
      throw DomainError("shape must be at least 16 in dimension " + std::to_string(d));
  }
  Eigen::ArrayXd w = trapezoid_1d(shape_[0], spacing(0));
  if (shape_.size() == 2) {
    const Eigen::ArrayXd w1 = trapezoid_1d(shape_[1], spacing(1));
    Eigen::ArrayXd w2(shape_[0] * shape_[1]);
    for (Eigen::Index i = 0; i < shape_[0]; ++i) w2.segment(i * shape_[1], shape_[1]) = w(i) * w1;
    w = std::move(w2);
  }
  weights_ = std::make_shared<const Eigen::ArrayXd>(std::move(w));
}

Eigen::Index Grid::size() const {
  Eigen::Index n = 1;
  for (auto s : shape_) n *= s;
  return n;
}

double Grid::spacing(int d) const { return (upper_[d] - lower_[d]) / static_cast<double>(shape_[d] - 1); }

double Grid::node(int d, Eigen::Index i) const {
  return lower_[d] + static_cast<double>(i) * spacing(d);
}

Eigen::VectorXd Grid::axis(int d) const {
  Eigen::VectorXd x(shape_[d]);
  for (Eigen::Index i = 0; i < shape_[d]; ++i) x(i) = node(d, i);
  return x;
}

Eigen::ArrayXd Grid::coordinates(int d) const {
  Eigen::ArrayXd c(size());
  if (dims() == 1) return axis(0).array();
  const Eigen::Index n1 = shape_[1];
  for (Eigen::Index i = 0; i < shape_[0]; ++i)
    for (Eigen::Index j = 0; j < n1; ++j) c(i * n1 + j) = d == 0 ? node(0, i) : node(1, j);
  return c;
}

bool Grid::operator==(const Grid& other) const {
  return shape_ == other.shape_ && lower_ == other.lower_ && upper_ == other.upper_;
}

GridDensity GridDensity::from_samples(std::vector<double> lower, std::vector<double> upper,
                                      std::vector<Eigen::Index> shape, Eigen::ArrayXd values) {
  return from_values(Grid(std::move(lower), std::move(upper), std::move(shape)), std::move(values));
}

GridDensity GridDensity::from_values(const Grid& grid, Eigen::ArrayXd values) {
  if (values.size() != grid.size())
    throw DimensionError("expected " + std::to_string(grid.size()) + " values, got " +
                         std::to_string(values.size()));
  if (!values.isFinite().all()) throw ValueError("density values must be finite");
  if ((values < 0.0).any()) throw ValueError("density values must be nonnegative");
  if ((values == 0.0).all()) throw ValueError("density values are all zero");
  return GridDensity(grid, std::move(values), false);
}

OpinionProfile::OpinionProfile(std::vector<GridDensity> densities) : densities_(std::move(densities)) {
  if (densities_.empty()) throw ValueError("an opinion profile needs at least one density");
  positive_ = true;
  for (const auto& d : densities_) {
    require_same_grid(densities_.front().grid(), d.grid());
    positive_ = positive_ && d.positive();
  }
}

double integrate(const Grid& grid, const Eigen::ArrayXd& values) {
  return (grid.quadrature_weights() * values).sum();
}

double integrate(const GridDensity& d) { return integrate(d.grid(), d.values()); }

GridDensity normalize(const GridDensity& d) {
  const double mass = integrate(d);
  if (!(mass > 1e3 * std::numeric_limits<double>::min()) || !std::isfinite(mass))
    throw DegenerateError("normalization constant is undefined (integral " + std::to_string(mass) + ")");
  return GridDensity(d.grid(), d.values() / mass, true);
}

Moments moments(const GridDensity& d) {
  if (!d.normalized()) throw NotNormalizedError("moments require a normalized density");
  const int n = d.dims();
  const Eigen::ArrayXd wv = d.grid().quadrature_weights() * d.values();
  std::vector<Eigen::ArrayXd> x;
  Moments m{Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
  for (int i = 0; i < n; ++i) {
    x.push_back(d.grid().coordinates(i));
    m.mean(i) = (wv * x[i]).sum();
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      m.cov(i, j) = m.cov(j, i) = (wv * (x[i] - m.mean(i)) * (x[j] - m.mean(j))).sum();
  return m;
}

double central_moment(const GridDensity& d, int dim, int order) {
  if (dim < 0 || dim >= d.dims()) throw DimensionError("dimension out of range");
  const Moments m = moments(d);
  const Eigen::ArrayXd wv = d.grid().quadrature_weights() * d.values();
  return (wv * (d.grid().coordinates(dim) - m.mean(dim)).pow(order)).sum();
}

CellEvent::CellEvent(const Grid& grid, std::vector<bool> mask) : grid_(grid), mask_(std::move(mask)) {
  const auto& s = grid_.shape();
  const Eigen::Index c0 = s[0] - 1;
  const Eigen::Index c1 = grid_.dims() == 2 ? s[1] - 1 : 1;
  if (static_cast<Eigen::Index>(mask_.size()) != c0 * c1)
    throw DimensionError("event mask must have one entry per grid cell");
  node_weights_ = Eigen::ArrayXd::Zero(grid_.size());
  if (grid_.dims() == 1) {
    const double half = 0.5 * grid_.spacing(0);
    for (Eigen::Index c = 0; c < c0; ++c)
      if (mask_[c]) {
        node_weights_(c) += half;
        node_weights_(c + 1) += half;
      }
    return;
  }
  const double quarter = 0.25 * grid_.spacing(0) * grid_.spacing(1);
  const Eigen::Index n1 = s[1];
  for (Eigen::Index i = 0; i < c0; ++i)
    for (Eigen::Index j = 0; j < c1; ++j)
      if (mask_[i * c1 + j]) {
        node_weights_(i * n1 + j) += quarter;
        node_weights_(i * n1 + j + 1) += quarter;
        node_weights_((i + 1) * n1 + j) += quarter;
        node_weights_((i + 1) * n1 + j + 1) += quarter;
      }
}

CellEvent CellEvent::from_ranges(const Grid& grid,
                                 const std::vector<std::pair<Eigen::Index, Eigen::Index>>& ranges) {
  if (grid.dims() != 1) throw DimensionError("cell ranges describe 1-D events");
  const Eigen::Index cells = grid.shape()[0] - 1;
  std::vector<bool> mask(cells, false);
  for (auto [first, last] : ranges) {
    if (first < 0 || last > cells || first > last) throw IndexError("cell range out of bounds");
    for (Eigen::Index c = first; c < last; ++c) mask[c] = true;
  }
  return CellEvent(grid, std::move(mask));
}

CellEvent CellEvent::product(const Grid& grid, const std::vector<bool>& mask0, const std::vector<bool>& mask1) {
  if (grid.dims() != 2) throw DimensionError("product events need a 2-D grid");
  const std::size_t c0 = grid.shape()[0] - 1, c1 = grid.shape()[1] - 1;
  if (mask0.size() != c0 || mask1.size() != c1) throw DimensionError("axis masks must match cell counts");
  std::vector<bool> mask(c0 * c1);
  for (std::size_t i = 0; i < c0; ++i)
    for (std::size_t j = 0; j < c1; ++j) mask[i * c1 + j] = mask0[i] && mask1[j];
  return CellEvent(grid, std::move(mask));
}

CellEvent CellEvent::complement() const {
  std::vector<bool> m(mask_.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = !mask_[i];
  return CellEvent(grid_, std::move(m));
}

CellEvent CellEvent::intersect(const CellEvent& other) const {
  require_same_grid(grid_, other.grid_);
  std::vector<bool> m(mask_.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = mask_[i] && other.mask_[i];
  return CellEvent(grid_, std::move(m));
}

double probability(const GridDensity& d, const CellEvent& event) {
  require_same_grid(d.grid(), event.grid());
  return (event.node_weights() * d.values()).sum();
}

double l1_distance(const Grid& grid, const Eigen::ArrayXd& a, const Eigen::ArrayXd& b) {
  return (grid.quadrature_weights() * (a - b).abs()).sum();
}

double l1_distance(const GridDensity& a, const GridDensity& b) {
  require_same_grid(a.grid(), b.grid());
  return l1_distance(a.grid(), a.values(), b.values());
}

std::vector<double> local_maxima(const GridDensity& d, double rel_flat_tol) {
  if (d.dims() != 1) throw DimensionError("local_maxima works on 1-D densities");
  const Eigen::ArrayXd& v = d.values();
  const double tol = rel_flat_tol * v.maxCoeff();
  const Eigen::Index n = v.size();
  std::vector<double> out;
  Eigen::Index i = 0;
  while (i < n) {
    Eigen::Index j = i;
    while (j + 1 < n && std::abs(v(j + 1) - v(i)) <= tol) ++j;
    const bool interior = i > 0 && j + 1 < n;
    if (interior && v(i - 1) < v(i) - tol && v(j + 1) < v(j) - tol)
      out.push_back(0.5 * (d.grid().node(0, i) + d.grid().node(0, j)));
    i = j + 1;
  }
  return out;
}

}  // namespace fusion
