#include "fusion/fig4.hpp"

#include <algorithm>
#include <fstream>

#include "fusion/errors.hpp"
#include "fusion/io.hpp"
#include "fusion/pooling.hpp"

namespace fusion {

std::pair<GaussianD, GaussianD> fig4_agents(char panel) {
  auto g = [](double m, double v) {
    return GaussianD(Eigen::VectorXd::Constant(1, m), Eigen::MatrixXd::Constant(1, 1, v));
  };
  if (panel == 'a') return {g(-2.5, 1.0), g(2.5, 1.0)};
  if (panel == 'b') return {g(0.0, 5.0), g(0.0, 0.5)};
  throw ValueError("figure panel must be 'a' or 'b'");
}

Fig4Panel fig4_panel(char panel, Eigen::Index points) {
  const auto [a, b] = fig4_agents(panel);
  double lo = 0.0, hi = 0.0;
  for (const auto* g : {&a, &b}) {
    const double s = kGaussianGridSigmas * std::sqrt(g->cov()(0, 0));
    lo = std::min(lo, g->mean()(0) - s);
    hi = std::max(hi, g->mean()(0) + s);
  }
  Fig4Panel p{panel, to_grid(a, {lo}, {hi}, {points}), to_grid(b, {lo}, {hi}, {points}), {}};
  const OpinionProfile profile({p.q1, p.q2});
  const Eigen::Vector2d w(0.5, 0.5);
  p.fused.emplace_back("alpha=-1", holder_pool(profile, w, -1.0));
  p.fused.emplace_back("alpha=0+", log_linear_pool(profile, w));
  p.fused.emplace_back("alpha=0.5", holder_pool(profile, w, 0.5));
  p.fused.emplace_back("alpha=1", holder_pool(profile, w, 1.0));
  p.fused.emplace_back("alpha=2", holder_pool(profile, w, 2.0));
  return p;
}

void write_fig4_csv(const std::string& path, const Fig4Panel& p) {
  std::ofstream os(path);
  if (!os) throw ValueError("cannot open '" + path + "' for writing");
  os << "theta,q1,q2";
  for (const auto& [label, d] : p.fused) os << ',' << label;
  os << '\n';
  const Grid& g = p.q1.grid();
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    os << format_double(g.node(0, i)) << ',' << format_double(p.q1.values()(i)) << ','
       << format_double(p.q2.values()(i));
    for (const auto& f : p.fused) os << ',' << format_double(f.second.values()(i));
    os << '\n';
  }
  if (!os) throw ValueError("failed writing '" + path + "'");
}

}  // namespace fusion
