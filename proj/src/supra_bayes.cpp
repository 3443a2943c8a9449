#include "fusion/supra_bayes.hpp"

#include "fusion/pooling.hpp"

namespace fusion {

GridDensity multiplicative_posterior_fusion(const GridDensity& prior, const OpinionProfile& posteriors,
                                            const std::optional<Eigen::VectorXd>& weights) {
  return multiplicative_pool(posteriors, prior, weights);
}

}  // namespace fusion
