#include "fusion/axioms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include "fusion/errors.hpp"

namespace fusion {

namespace {

using Rng = std::mt19937_64;
using A = Axiom;
using E = Expectation;
using P = PoolingKind;

double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
Eigen::Index uniform_index(Rng& rng, Eigen::Index a, Eigen::Index b) {
  return std::uniform_int_distribution<Eigen::Index>(a, b)(rng);
}

constexpr double kLower = -6.0;
constexpr double kUpper = 6.0;

// Mixture of 1–3 Gaussians, means in the central 60% of the domain.
Eigen::ArrayXd random_mixture(Rng& rng, const Eigen::ArrayXd& x) {
  const double half = 0.3 * (kUpper - kLower);
  const double scale = (kUpper - kLower) / 12.0;
  const int comps = static_cast<int>(uniform_index(rng, 1, 3));
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(x.size());
  for (int c = 0; c < comps; ++c) {
    const double m = uniform(rng, -half, half);
    const double s = uniform(rng, 0.3, 1.5) * scale;
    const double w = uniform(rng, 0.2, 1.0);
    v += w / s * (-0.5 * ((x - m) / s).square()).exp();
  }
  return v;
}

GridDensity random_density(Rng& rng, const Grid& grid) {
  return normalize(GridDensity::from_values(grid, random_mixture(rng, grid.axis(0).array())));
}

OpinionProfile random_profile(Rng& rng, const Grid& grid, std::size_t k) {
  std::vector<GridDensity> ds;
  for (std::size_t i = 0; i < k; ++i) ds.push_back(random_density(rng, grid));
  return OpinionProfile(std::move(ds));
}

Eigen::ArrayXd outer(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b) {
  Eigen::ArrayXd v(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) v.segment(i * b.size(), b.size()) = a(i) * b;
  return v;
}

OpinionProfile random_product_profile(Rng& rng, const Grid& grid2, std::size_t k) {
  std::vector<GridDensity> ds;
  for (std::size_t i = 0; i < k; ++i) {
    const Eigen::ArrayXd a = random_mixture(rng, grid2.axis(0).array());
    const Eigen::ArrayXd b = random_mixture(rng, grid2.axis(1).array());
    ds.push_back(normalize(GridDensity::from_values(grid2, outer(a, b))));
  }
  return OpinionProfile(std::move(ds));
}

std::string describe_ranges(const char* label, const std::vector<std::pair<Eigen::Index, Eigen::Index>>& r) {
  std::ostringstream os;
  os << label << "=";
  for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << "[" << r[i].first << "," << r[i].second << ")";
  return os.str();
}

// Union of 1–3 random cell ranges.
std::vector<std::pair<Eigen::Index, Eigen::Index>> random_ranges(Rng& rng, Eigen::Index cells, Eigen::Index min_w,
                                                                 Eigen::Index max_w, int max_count = 3) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> r;
  const int count = static_cast<int>(uniform_index(rng, 1, max_count));
  for (int i = 0; i < count; ++i) {
    const Eigen::Index w = uniform_index(rng, min_w, std::min(max_w, cells - 2));
    const Eigen::Index first = uniform_index(rng, 1, cells - 1 - w);
    r.emplace_back(first, first + w);
  }
  return r;
}

std::vector<bool> ranges_mask(Eigen::Index cells, const std::vector<std::pair<Eigen::Index, Eigen::Index>>& r) {
  std::vector<bool> m(cells, false);
  for (auto [a, b] : r)
    for (Eigen::Index c = a; c < b; ++c) m[c] = true;
  return m;
}

struct Likelihood {
  Eigen::ArrayXd values;
  std::string descriptor;
};

// Bounded positive likelihood: a two-level step or a Gaussian bump on a floor.
Likelihood random_likelihood(Rng& rng, const Grid& grid) {
  const Eigen::ArrayXd x = grid.axis(0).array();
  std::ostringstream os;
  os.precision(6);
  if (uniform(rng, 0.0, 1.0) < 0.5) {
    const double a = uniform(rng, 0.2, 5.0), b = uniform(rng, 0.2, 5.0);
    const double lo = uniform(rng, kLower, kUpper), hi = uniform(rng, lo, kUpper);
    os << "step(" << a << " on [" << lo << "," << hi << "], " << b << " elsewhere)";
    return {((x >= lo) && (x <= hi)).select(Eigen::ArrayXd::Constant(x.size(), a), b), os.str()};
  }
  const double c = uniform(rng, 0.05, 1.0), m = uniform(rng, -4.0, 4.0), s = uniform(rng, 0.5, 2.0);
  os << "bump(floor=" << c << ", mean=" << m << ", sd=" << s << ")";
  return {c + (-0.5 * ((x - m) / s).square()).exp(), os.str()};
}

OpinionProfile replace(const OpinionProfile& p, std::size_t k, GridDensity d) {
  std::vector<GridDensity> ds = p.densities();
  ds[k] = std::move(d);
  return OpinionProfile(std::move(ds));
}

OpinionProfile update_all(const OpinionProfile& p, const std::vector<Eigen::ArrayXd>& ell) {
  std::vector<GridDensity> ds;
  for (std::size_t k = 0; k < p.size(); ++k) ds.push_back(bayes_update(p[k], ell[k]));
  return OpinionProfile(std::move(ds));
}

// Moves mass inside the interior of A and inside the interior of Aᶜ separately,
// leaving every event probability Q_k(A) and the total mass unchanged.
GridDensity redistribute(Rng& rng, const GridDensity& q, const std::vector<bool>& cells) {
  const Grid& g = q.grid();
  const Eigen::Index n = g.size();
  const Eigen::ArrayXd& tw = g.quadrature_weights();
  Eigen::ArrayXd v = q.values();
  const Eigen::ArrayXd x = g.axis(0).array();
  for (bool inside : {true, false}) {
    std::vector<Eigen::Index> nodes;
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool left = i == 0 || cells[i - 1] == inside;
      const bool right = i == n - 1 || cells[i] == inside;
      const bool touches = (i > 0 && cells[i - 1] == inside) || (i < n - 1 && cells[i] == inside);
      if (left && right && touches) nodes.push_back(i);
    }
    if (nodes.size() < 3) continue;
    const double f = uniform(rng, 0.5, 3.0), ph = uniform(rng, 0.0, 6.28);
    double num = 0.0, den = 0.0;
    for (auto i : nodes) {
      num += tw(i) * v(i) * std::sin(f * x(i) + ph);
      den += tw(i) * v(i);
    }
    const double mean = num / den;
    double peak = 0.0;
    for (auto i : nodes) peak = std::max(peak, std::abs(std::sin(f * x(i) + ph) - mean));
    if (peak == 0.0) continue;
    const double eps = 0.5 / peak;
    for (auto i : nodes) v(i) *= 1.0 + eps * (std::sin(f * x(i) + ph) - mean);
  }
  return normalize(GridDensity::from_values(g, std::move(v)));
}

GridDensity reflect(const GridDensity& q) {
  return normalize(GridDensity::from_values(q.grid(), q.values().reverse().eval()));
}

// Overwrite node values at `at` with `vals` and rescale the other nodes to keep unit mass.
GridDensity with_probe_values(const GridDensity& q, const std::vector<Eigen::Index>& at, const std::vector<double>& vals) {
  const Eigen::ArrayXd& tw = q.grid().quadrature_weights();
  Eigen::ArrayXd v = q.values();
  std::vector<bool> probe(v.size(), false);
  double probe_mass = 0.0;
  for (std::size_t j = 0; j < at.size(); ++j) {
    v(at[j]) = vals[j];
    probe[at[j]] = true;
    probe_mass += tw(at[j]) * vals[j];
  }
  double rest = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!probe[i]) rest += tw(i) * v(i);
  const double s = (1.0 - probe_mass) / rest;
  if (!(s > 0.0)) throw DegenerateError("probe values carry more than unit mass");
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!probe[i]) v(i) *= s;
  return normalize(GridDensity::from_values(q.grid(), std::move(v)));
}

std::vector<Eigen::Index> distinct_nodes(Rng& rng, Eigen::Index n, int count) {
  std::vector<Eigen::Index> all(n);
  std::iota(all.begin(), all.end(), Eigen::Index{0});
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(count);
  return all;
}

std::string describe_nodes(const char* label, const std::vector<Eigen::Index>& v) {
  std::ostringstream os;
  os << label << "=[";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << "]";
  return os.str();
}

double ratio_spread(const std::vector<double>& r) {
  double worst = 0.0;
  for (double x : r) worst = std::max(worst, std::abs(x / r.front() - 1.0));
  return worst;
}

struct TrialResult {
  double residual = 0.0;
  std::string descriptor;
};

class Harness {
 public:
  explicit Harness(const PoolingSpec& spec)
      : spec_(spec), grid1_(axiom_grid_1d()), grid2_(axiom_grid_2d()), q0_1_(default_q0()), q0_2_(q0_1_) {
    k_ = agent_count();
    if (spec_.kind == P::Dictatorship) {
      if (!spec_.dictator) throw ValueError("dictatorship pooling needs a dictator index");
      if (*spec_.dictator >= k_) throw IndexError("dictator index out of range");
    }
    if (spec_.q0) {
      if (spec_.q0->grid() != grid1_) throw GridMismatchError("q0 must live on the axiom harness grid");
      q0_1_ = spec_.q0->normalized() ? *spec_.q0 : normalize(*spec_.q0);
    }
    const Eigen::ArrayXd x1 = grid1_.axis(0).array();
    xi0_1_ = spec_.xi0.value_or((0.5 * (0.9 * x1).sin() + 0.1 * x1).exp());
    if (xi0_1_.size() != grid1_.size()) throw DimensionError("xi0 must have one value per harness grid node");
    const Eigen::ArrayXd q0_axis = resample(q0_1_.values(), x1, grid2_.axis(0).array());
    q0_2_ = normalize(GridDensity::from_values(grid2_, outer(q0_axis, q0_axis)));
    const Eigen::ArrayXd xi_axis = resample(xi0_1_, x1, grid2_.axis(0).array());
    xi0_2_ = outer(xi_axis, xi_axis);
  }

  std::size_t k() const { return k_; }
  const Grid& grid1() const { return grid1_; }
  const Grid& grid2() const { return grid2_; }

  GridDensity fuse(const OpinionProfile& p) const {
    PoolingSpec s = spec_;
    const bool two = p.grid().dims() == 2;
    if (needs_q0()) s.q0 = two ? q0_2_ : q0_1_;
    if (spec_.kind == P::GeneralizedLogLinear) s.xi0 = two ? xi0_2_ : xi0_1_;
    return pool(p, s);
  }

  TrialResult run(Axiom axiom, Rng& rng) const {
    switch (axiom) {
      case A::Symmetry: return symmetry(rng);
      case A::ZeroPreservation: return zero_preservation(rng);
      case A::Unanimity: return unanimity(rng);
      case A::StrongSetwise: return setwise(rng, true);
      case A::WeakSetwise: return setwise(rng, false);
      case A::LikelihoodPrinciple: return likelihood_principle(rng, false);
      case A::WeakLikelihoodPrinciple: return likelihood_principle(rng, true);
      case A::IndependencePreservation: return independence(rng);
      case A::FactorizationPreservation: return factorization(rng);
      case A::ExternalBayesianity: return external_bayes(rng);
      case A::IndividualizedBayesianity: return individualized_bayes(rng);
      case A::GeneralizedBayesianity: return generalized_bayes(rng);
    }
    throw ValueError("unknown axiom");
  }

 private:
  bool needs_q0() const {
    return spec_.kind == P::GeneralizedLinear || spec_.kind == P::Multiplicative ||
           spec_.kind == P::GeneralizedMultiplicative || spec_.kind == P::Dogmatic;
  }

  std::size_t agent_count() const {
    if (spec_.kind == P::GeneralizedLinear) {
      if (spec_.weights.size() < 2) throw DimensionError("generalized linear pooling needs K+1 weights");
      return static_cast<std::size_t>(spec_.weights.size() - 1);
    }
    if (spec_.weights.size() > 0) return static_cast<std::size_t>(spec_.weights.size());
    return 3;
  }

  GridDensity default_q0() const {
    const Eigen::ArrayXd x = grid1_.axis(0).array();
    return normalize(GridDensity::from_values(grid1_, (-0.5 * ((x - 0.5) / 2.5).square()).exp()));
  }

  static Eigen::ArrayXd resample(const Eigen::ArrayXd& v, const Eigen::ArrayXd& x, const Eigen::ArrayXd& at) {
    Eigen::ArrayXd out(at.size());
    const double h = x(1) - x(0);
    for (Eigen::Index i = 0; i < at.size(); ++i) {
      const double u = (at(i) - x(0)) / h;
      const Eigen::Index j = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::floor(u)), 0, x.size() - 2);
      const double f = u - static_cast<double>(j);
      out(i) = (1.0 - f) * v(j) + f * v(j + 1);
    }
    return out;
  }

  double q0_probability(const CellEvent& e) const { return probability(q0_1_, e); }

  // Known event-probability map h_A(Q_1(A), ..., Q_K(A)); nullopt if none is known.
  std::optional<double> known_setwise(const OpinionProfile& p, const CellEvent& e, bool strong) const {
    switch (spec_.kind) {
      case P::Linear: {
        double acc = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) acc += spec_.weights(k) * probability(p[k], e);
        return acc;
      }
      case P::Dictatorship: return probability(p[*spec_.dictator], e);
      case P::GeneralizedLinear:
        if (strong) return std::nullopt;
        {
          double acc = spec_.weights(0) * q0_probability(e);
          for (std::size_t k = 0; k < p.size(); ++k) acc += spec_.weights(k + 1) * probability(p[k], e);
          return acc;
        }
      case P::Dogmatic:
        if (strong) return std::nullopt;
        return q0_probability(e);
      default: return std::nullopt;
    }
  }

  TrialResult symmetry(Rng& rng) const {
    const OpinionProfile p = random_profile(rng, grid1_, k_);
    if (k_ < 2) return {0.0, "single agent"};
    std::vector<std::size_t> perm(k_);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    while (std::is_sorted(perm.begin(), perm.end())) std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<GridDensity> ds;
    for (auto i : perm) ds.push_back(p[i]);
    std::ostringstream os;
    os << "permutation=[";
    for (std::size_t i = 0; i < k_; ++i) os << (i ? "," : "") << perm[i];
    os << "]";
    return {l1_distance(fuse(p), fuse(OpinionProfile(std::move(ds)))), os.str()};
  }

  TrialResult zero_preservation(Rng& rng) const {
    const OpinionProfile base = random_profile(rng, grid1_, k_);
    const Eigen::Index cells = grid1_.shape()[0] - 1;
    const auto ranges = random_ranges(rng, cells, 8, 40, 2);
    std::vector<GridDensity> ds;
    for (const auto& d : base.densities()) {
      Eigen::ArrayXd v = d.values();
      for (auto [a, b] : ranges) v.segment(a, b - a + 1).setZero();
      ds.push_back(normalize(GridDensity::from_values(grid1_, std::move(v))));
    }
    const CellEvent e(grid1_, ranges_mask(cells, ranges));
    return {probability(fuse(OpinionProfile(std::move(ds))), e), describe_ranges("zero cells", ranges)};
  }

  TrialResult unanimity(Rng& rng) const {
    const GridDensity q = random_density(rng, grid1_);
    return {l1_distance(fuse(OpinionProfile(std::vector<GridDensity>(k_, q))), q), "identical agents"};
  }

  TrialResult setwise(Rng& rng, bool strong) const {
    const OpinionProfile p = random_profile(rng, grid1_, k_);
    const Eigen::Index cells = grid1_.shape()[0] - 1;
    const auto ranges = random_ranges(rng, cells, 5, 60);
    const std::vector<bool> mask = ranges_mask(cells, ranges);
    const CellEvent e(grid1_, mask);
    const double fused = probability(fuse(p), e);
    if (auto h = known_setwise(p, e, strong)) return {std::abs(fused - *h), describe_ranges("event cells", ranges)};
    // Consistency: a profile with the same event probabilities must give the same fused probability.
    std::vector<GridDensity> moved;
    for (const auto& d : p.densities()) moved.push_back(redistribute(rng, d, mask));
    double r = std::abs(fused - probability(fuse(OpinionProfile(std::move(moved))), e));
    std::string desc = describe_ranges("event cells", ranges) + " with mass redistributed inside A and its complement";
    if (strong) {
      std::vector<GridDensity> mirrored;
      for (const auto& d : p.densities()) mirrored.push_back(reflect(d));
      std::vector<bool> mmask(mask.rbegin(), mask.rend());
      const double other = probability(fuse(OpinionProfile(std::move(mirrored))), CellEvent(grid1_, mmask));
      if (std::abs(fused - other) > r) {
        r = std::abs(fused - other);
        desc = describe_ranges("event cells", ranges) + " against the mirrored profile and mirrored event";
      }
    }
    return {r, desc};
  }

  TrialResult likelihood_principle(Rng& rng, bool same_nodes) const {
    const OpinionProfile p = random_profile(rng, grid1_, k_);
    const OpinionProfile base = random_profile(rng, grid1_, k_);
    const Eigen::Index n = grid1_.size();
    const auto a = distinct_nodes(rng, n, 8);
    const auto b = same_nodes ? a : distinct_nodes(rng, n, 8);
    std::vector<GridDensity> ds;
    for (std::size_t k = 0; k < k_; ++k) {
      std::vector<double> vals;
      for (auto i : a) vals.push_back(p[k].values()(i));
      ds.push_back(with_probe_values(base[k], b, vals));
    }
    const GridDensity g1 = fuse(p), g2 = fuse(OpinionProfile(std::move(ds)));
    std::vector<double> ratios;
    for (std::size_t j = 0; j < a.size(); ++j) ratios.push_back(g1.values()(a[j]) / g2.values()(b[j]));
    return {ratio_spread(ratios), describe_nodes("probe nodes", a) + (same_nodes ? "" : " " + describe_nodes("matched to", b))};
  }

  TrialResult independence(Rng& rng) const {
    const OpinionProfile p = random_product_profile(rng, grid2_, k_);
    const GridDensity g = fuse(p);
    const Eigen::Index c0 = grid2_.shape()[0] - 1, c1 = grid2_.shape()[1] - 1;
    TrialResult worst;
    for (int rep = 0; rep < 4; ++rep) {
      const auto r0 = random_ranges(rng, c0, 2, 20, 2);
      const auto r1 = random_ranges(rng, c1, 2, 20, 2);
      const auto m0 = ranges_mask(c0, r0), m1 = ranges_mask(c1, r1);
      const std::vector<bool> all0(c0, true), all1(c1, true);
      const double pa = probability(g, CellEvent::product(grid2_, m0, all1));
      const double pb = probability(g, CellEvent::product(grid2_, all0, m1));
      const double pab = probability(g, CellEvent::product(grid2_, m0, m1));
      const double r = std::abs(pab - pa * pb);
      if (r >= worst.residual) worst = {r, describe_ranges("theta1 cells", r0) + " x " + describe_ranges("theta2 cells", r1)};
    }
    return worst;
  }

  TrialResult factorization(Rng& rng) const {
    const OpinionProfile p = random_product_profile(rng, grid2_, k_);
    const GridDensity g = fuse(p);
    const Eigen::Index n0 = grid2_.shape()[0], n1 = grid2_.shape()[1];
    Eigen::ArrayXd tw0 = Eigen::ArrayXd::Constant(n0, grid2_.spacing(0)), tw1 = Eigen::ArrayXd::Constant(n1, grid2_.spacing(1));
    tw0(0) *= 0.5;
    tw0(n0 - 1) *= 0.5;
    tw1(0) *= 0.5;
    tw1(n1 - 1) *= 0.5;
    const Eigen::Map<const Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(g.values().data(), n0, n1);
    const Eigen::ArrayXd m0 = (m.rowwise() * tw1.transpose()).rowwise().sum();
    const Eigen::ArrayXd m1 = (m.colwise() * tw0).colwise().sum().transpose();
    return {l1_distance(grid2_, g.values(), outer(m0, m1)), "product-form profile on the 2-D grid"};
  }

  TrialResult external_bayes(Rng& rng) const {
    const OpinionProfile p = random_profile(rng, grid1_, k_);
    const Likelihood ell = random_likelihood(rng, grid1_);
    const GridDensity lhs = bayes_update(fuse(p), ell.values);
    const GridDensity rhs = fuse(update_all(p, std::vector<Eigen::ArrayXd>(k_, ell.values)));
    return {l1_distance(lhs, rhs), "common likelihood " + ell.descriptor};
  }

  TrialResult individualized_bayes(Rng& rng) const {
    const OpinionProfile p = random_profile(rng, grid1_, k_);
    const Likelihood ell = random_likelihood(rng, grid1_);
    const std::size_t k = static_cast<std::size_t>(uniform_index(rng, 0, static_cast<Eigen::Index>(k_) - 1));
    const GridDensity lhs = bayes_update(fuse(p), ell.values);
    const GridDensity rhs = fuse(replace(p, k, bayes_update(p[k], ell.values)));
    return {l1_distance(lhs, rhs), "agent " + std::to_string(k) + " likelihood " + ell.descriptor};
  }

  std::optional<Eigen::ArrayXd> known_fused_likelihood(const std::vector<Eigen::ArrayXd>& ell) const {
    const Eigen::Index n = ell.front().size();
    Eigen::ArrayXd h = Eigen::ArrayXd::Ones(n);
    switch (spec_.kind) {
      case P::LogLinear:
      case P::GeneralizedLogLinear:
      case P::GeneralizedMultiplicative:
        for (std::size_t k = 0; k < k_; ++k) h *= ell[k].pow(spec_.weights(k));
        return h;
      case P::Multiplicative:
        for (std::size_t k = 0; k < k_; ++k) h *= ell[k];
        return h;
      case P::Dictatorship: return ell[*spec_.dictator];
      case P::Dogmatic: return h;
      default: return std::nullopt;
    }
  }

  TrialResult generalized_bayes(Rng& rng) const {
    const OpinionProfile p = random_profile(rng, grid1_, k_);
    std::vector<Eigen::ArrayXd> ell;
    std::string desc = "likelihoods";
    for (std::size_t k = 0; k < k_; ++k) {
      Likelihood l = random_likelihood(rng, grid1_);
      ell.push_back(std::move(l.values));
      desc += " " + l.descriptor;
    }
    if (auto h = known_fused_likelihood(ell))
      return {l1_distance(bayes_update(fuse(p), *h), fuse(update_all(p, ell))), desc};
    // Consistency: the fused likelihood implied by one profile must also work for another.
    const Eigen::ArrayXd implied = fuse(update_all(p, ell)).values() / fuse(p).values();
    const OpinionProfile other = random_profile(rng, grid1_, k_);
    return {l1_distance(bayes_update(fuse(other), implied), fuse(update_all(other, ell))),
            desc + " with the fused likelihood implied by a second profile"};
  }

  PoolingSpec spec_;
  Grid grid1_, grid2_;
  GridDensity q0_1_, q0_2_;
  Eigen::ArrayXd xi0_1_, xi0_2_;
  std::size_t k_ = 0;
};

bool not_applicable(const PoolingSpec& spec, Axiom axiom) {
  if (spec.kind == P::ChiTransform) return axiom == A::ZeroPreservation && spec.chi.needs_positive();
  return expectation(spec.kind, axiom) == E::NotApplicable;
}

}  // namespace

std::string to_string(Axiom a) { return "A" + std::to_string(axiom_index(a)); }

std::string axiom_name(Axiom a) {
  switch (a) {
    case A::Symmetry: return "symmetry";
    case A::ZeroPreservation: return "zero preservation";
    case A::Unanimity: return "unanimity";
    case A::StrongSetwise: return "strong setwise function property";
    case A::WeakSetwise: return "weak setwise function property";
    case A::LikelihoodPrinciple: return "likelihood principle";
    case A::WeakLikelihoodPrinciple: return "weak likelihood principle";
    case A::IndependencePreservation: return "independence preservation";
    case A::FactorizationPreservation: return "factorization preservation";
    case A::ExternalBayesianity: return "external Bayesianity";
    case A::IndividualizedBayesianity: return "individualized Bayesianity";
    case A::GeneralizedBayesianity: return "generalized Bayesianity";
  }
  return "unknown";
}

Axiom parse_axiom(const std::string& text) {
  for (int i = 1; i <= kAxiomCount; ++i) {
    const Axiom a = axiom_from_index(i);
    if (text == to_string(a) || text == "a" + std::to_string(i) || text == axiom_name(a)) return a;
  }
  throw ValueError("unknown axiom '" + text + "'");
}

std::string to_string(Expectation e) {
  switch (e) {
    case E::Satisfied: return "satisfied";
    case E::Blank: return "violated-or-unknown";
    case E::NotApplicable: return "n.a.";
    case E::EqualWeightsOnly: return "equal-weights-only";
  }
  return "unknown";
}

const ExpectedMatrix& expected_matrix() {
  static const ExpectedMatrix table = [] {
    constexpr E S = E::Satisfied, B = E::Blank, N = E::NotApplicable, W = E::EqualWeightsOnly;
    const std::vector<std::pair<PoolingKind, std::array<E, kAxiomCount>>> rows = {
        {P::Linear, {W, S, S, S, S, S, S, B, B, B, B, B}},
        {P::GeneralizedLinear, {W, B, B, B, S, B, S, B, B, B, B, B}},
        {P::LogLinear, {W, N, S, B, B, S, S, B, S, S, B, S}},
        {P::GeneralizedLogLinear, {W, N, B, B, B, B, S, B, S, S, B, S}},
        {P::Holder, {W, N, S, B, B, S, S, B, B, B, B, B}},
        {P::InverseLinear, {W, N, S, B, B, S, S, B, B, B, B, B}},
        {P::Multiplicative, {S, N, B, B, B, B, S, B, S, B, S, S}},
        {P::GeneralizedMultiplicative, {W, N, B, B, B, B, S, B, S, B, B, S}},
        {P::Dictatorship, {B, S, S, S, S, S, S, S, S, S, B, S}},
        {P::Dogmatic, {S, B, B, B, S, B, S, B, B, B, B, S}},
    };
    ExpectedMatrix m;
    for (const auto& [kind, row] : rows)
      for (int i = 0; i < kAxiomCount; ++i) m[{kind, axiom_from_index(i + 1)}] = row[i];
    return m;
  }();
  return table;
}

Expectation expectation(PoolingKind kind, Axiom axiom) {
  const auto& m = expected_matrix();
  const auto it = m.find({kind, axiom});
  if (it == m.end()) throw ValueError("no published expectation for " + to_string(kind));
  return it->second;
}

Grid axiom_grid_1d() { return Grid({kLower}, {kUpper}, {201}); }
Grid axiom_grid_2d() { return Grid({kLower, kLower}, {kUpper, kUpper}, {41, 41}); }

AxiomCheckReport check_axiom(const PoolingSpec& spec, Axiom axiom, int trials, std::uint64_t seed, double tol) {
  if (trials < 1) throw ValueError("at least one trial is required");
  if (axiom_index(axiom) < 1 || axiom_index(axiom) > kAxiomCount) throw ValueError("unknown axiom");
  if (not_applicable(spec, axiom))
    throw UnsupportedAxiomError(to_string(axiom) + " is not applicable to " + to_string(spec.kind) + " pooling");
  const Harness h(spec);
  AxiomCheckReport report;
  report.axiom = axiom;
  report.pooling = spec;
  report.trials = trials;
  report.tolerance = tol;
  for (int t = 0; t < trials; ++t) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(axiom_index(axiom))};
    Rng rng(seq);
    const TrialResult r = h.run(axiom, rng);
    const double v = std::isnan(r.residual) ? std::numeric_limits<double>::infinity() : r.residual;
    if (v > report.max_violation) report.max_violation = v;
    if (v > tol && !report.counterexample) report.counterexample = Counterexample{seed, t, r.descriptor};
  }
  report.passed = report.max_violation <= tol;
  return report;
}

}  // namespace fusion
