#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fusion/gaussian.hpp"
#include "fusion/grid_density.hpp"

namespace fusion {

// Hölder pooling of two Gaussians with w = (0.5, 0.5).
// Panel 'a': N(−2.5, 1) and N(2.5, 1). Panel 'b': N(0, 5) and N(0, 0.5).
struct Fig4Panel {
  char panel = 'a';
  GridDensity q1, q2;
  // Labels alpha=-1, alpha=0+ (log-linear), alpha=0.5, alpha=1, alpha=2 in that order.
  std::vector<std::pair<std::string, GridDensity>> fused;
};

std::pair<GaussianD, GaussianD> fig4_agents(char panel);
Fig4Panel fig4_panel(char panel, Eigen::Index points);
// Columns theta,q1,q2 then one per fused density.
void write_fig4_csv(const std::string& path, const Fig4Panel& p);

}  // namespace fusion
