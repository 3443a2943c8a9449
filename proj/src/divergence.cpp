#include "fusion/divergence.hpp"

#include <cmath>

#include "fusion/errors.hpp"

namespace fusion {

namespace {

void require_pair(const GridDensity& p, const GridDensity& q) {
  if (p.grid() != q.grid()) throw GridMismatchError("divergence arguments are on different grids");
  if (!p.normalized() || !q.normalized()) throw NotNormalizedError("divergences require normalized densities");
}

void require_support(const GridDensity& p, const GridDensity& q) {
  if (((q.values() == 0.0) && (p.values() > 0.0)).any())
    throw SupportError("first argument has mass where the second vanishes");
}

// Quadrature of an integrand defined node by node; nodes where both densities vanish contribute 0.
template <typename F>
double integrate_pointwise(const GridDensity& p, const GridDensity& q, F&& integrand) {
  const Eigen::ArrayXd& w = p.grid().quadrature_weights();
  const Eigen::ArrayXd& pv = p.values();
  const Eigen::ArrayXd& qv = q.values();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < pv.size(); ++i)
    if (pv(i) != 0.0 || qv(i) != 0.0) acc += w(i) * integrand(pv(i), qv(i));
  return acc;
}

void require_alpha(double alpha) {
  if (!std::isfinite(alpha) || alpha == 0.0 || alpha == 1.0)
    throw ValueError("alpha-divergence needs alpha outside {0, 1}");
}

}  // namespace

double f_divergence(const GridDensity& p, const GridDensity& q, const std::function<double(double)>& f) {
  require_pair(p, q);
  require_support(p, q);
  return integrate_pointwise(p, q, [&](double a, double b) { return b * f(a / b); });
}

double kl(const GridDensity& p, const GridDensity& q) {
  require_pair(p, q);
  require_support(p, q);
  return integrate_pointwise(p, q, [](double a, double b) { return a == 0.0 ? 0.0 : a * std::log(a / b); });
}

double reverse_kl(const GridDensity& p, const GridDensity& q) { return kl(q, p); }

double alpha_div(const GridDensity& p, const GridDensity& q, double alpha) {
  require_alpha(alpha);
  require_pair(p, q);
  require_support(p, q);
  if (alpha < 0.0 && ((p.values() == 0.0) && (q.values() > 0.0)).any())
    throw PositivityError("negative alpha needs the first argument positive wherever the second is");
  const double c = 1.0 / (alpha * (alpha - 1.0));
  return c * integrate_pointwise(p, q, [&](double a, double b) { return b * (std::pow(a / b, alpha) - 1.0); });
}

double reverse_alpha_div(const GridDensity& p, const GridDensity& q, double alpha) {
  return alpha_div(q, p, alpha);
}

double pearson_chi2(const GridDensity& p, const GridDensity& q) {
  require_pair(p, q);
  require_support(p, q);
  return integrate_pointwise(p, q, [](double a, double b) { return (a - b) * (a - b) / b; });
}

double l2(const Grid& grid, const Eigen::ArrayXd& p, const Eigen::ArrayXd& q) {
  if (p.size() != grid.size() || q.size() != grid.size()) throw DimensionError("value arrays must match the grid");
  return std::sqrt(integrate(grid, (p - q).square()));
}

double l2(const GridDensity& p, const GridDensity& q) {
  if (p.grid() != q.grid()) throw GridMismatchError("distance arguments are on different grids");
  return l2(p.grid(), p.values(), q.values());
}

double chi_distance(const Grid& grid, const Eigen::ArrayXd& p, const Eigen::ArrayXd& q, const Chi& chi) {
  if (chi.needs_positive() && ((p <= 0.0).any() || (q <= 0.0).any()))
    throw PositivityError("this chi transform needs strictly positive arguments");
  return l2(grid, chi.apply(p), chi.apply(q));
}

double chi_distance(const GridDensity& p, const GridDensity& q, const Chi& chi) {
  if (p.grid() != q.grid()) throw GridMismatchError("distance arguments are on different grids");
  return chi_distance(p.grid(), p.values(), q.values(), chi);
}

double cross_entropy(const GridDensity& p, const GridDensity& q) {
  require_pair(p, q);
  require_support(p, q);
  return -integrate_pointwise(p, q, [](double a, double b) { return a == 0.0 ? 0.0 : a * std::log(b); });
}

double entropy(const GridDensity& p) {
  if (!p.normalized()) throw NotNormalizedError("entropy requires a normalized density");
  return -integrate_pointwise(p, p, [](double a, double) { return a * std::log(a); });
}

DivergenceSpec::Kind parse_divergence_kind(const std::string& name) {
  using K = DivergenceSpec::Kind;
  if (name == "kl") return K::KL;
  if (name == "reverse-kl") return K::ReverseKL;
  if (name == "alpha") return K::Alpha;
  if (name == "reverse-alpha") return K::ReverseAlpha;
  if (name == "pearson") return K::PearsonChi2;
  if (name == "l2") return K::L2;
  if (name == "chi-distance") return K::ChiDistance;
  throw ValueError("unknown divergence kind '" + name + "'");
}

double divergence(const GridDensity& p, const GridDensity& q, const DivergenceSpec& spec) {
  using K = DivergenceSpec::Kind;
  switch (spec.kind) {
    case K::KL: return kl(p, q);
    case K::ReverseKL: return reverse_kl(p, q);
    case K::Alpha: return alpha_div(p, q, spec.alpha);
    case K::ReverseAlpha: return reverse_alpha_div(p, q, spec.alpha);
    case K::PearsonChi2: return pearson_chi2(p, q);
    case K::L2: return l2(p, q);
    case K::ChiDistance: return chi_distance(p, q, spec.chi);
  }
  throw ValueError("unknown divergence kind");
}

}  // namespace fusion
