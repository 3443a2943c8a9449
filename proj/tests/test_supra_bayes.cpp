#include <gtest/gtest.h>

#include <random>

#include "fusion/divergence.hpp"
#include "fusion/errors.hpp"
#include "fusion/gaussian.hpp"
#include "fusion/supra_bayes.hpp"
#include "support.hpp"

using namespace fusion;

namespace {

double max_abs(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Bayes on the stacked y computed by hand, no library code.
GaussianD direct_posterior(const LinearGaussianModelD& m, const Eigen::VectorXd& y) {
  const Eigen::MatrixXd h = m.H();
  const Eigen::MatrixXd si = m.Sigma().inverse();
  const Eigen::MatrixXd p0 = m.prior().cov().inverse();
  const Eigen::MatrixXd cov = (h.transpose() * si * h + p0).inverse();
  const Eigen::VectorXd mean = cov * (h.transpose() * si * y + p0 * m.prior().mean());
  return GaussianD(mean, symmetrize<double>(cov));
}

}  // namespace

TEST(LocalStatistics, Examples) {
  LinearGaussianModelD id({Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2)}, Eigen::MatrixXd::Identity(4, 4),
                          Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity());
  const Eigen::Vector4d y(1, 2, 3, 4);
  EXPECT_LT((local_statistics(id, y).t - y).cwiseAbs().maxCoeff(), 1e-15);

  LinearGaussianModelD ones({Eigen::MatrixXd::Ones(3, 1)}, Eigen::MatrixXd::Identity(3, 3), Eigen::VectorXd::Zero(1),
                            Eigen::MatrixXd::Ones(1, 1));
  EXPECT_NEAR(local_statistics(ones, Eigen::Vector3d(1, 2, 6)).t(0), 3.0, 1e-15);

  Eigen::MatrixXd h(2, 2);
  h << 1, 2, 2, 4;
  EXPECT_THROW(LinearGaussianModelD({h}, Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity()),
               RankError);
  EXPECT_THROW(LinearGaussianModelD({Eigen::MatrixXd::Ones(1, 2)}, Eigen::MatrixXd::Identity(1, 1), Eigen::Vector2d::Zero(),
                                    Eigen::Matrix2d::Identity()),
               RankError);
}

TEST(LocalStatistics, VkHkIsIdentity) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 50; ++t) {
    auto m = test::random_model(rng, 2, 3, false);
    auto ops = local_operators(m);
    for (std::size_t k = 0; k < m.K(); ++k)
      EXPECT_LT(max_abs(ops.V[k] * m.H_blocks()[k], Eigen::MatrixXd::Identity(2, 2)), 1e-10);
  }
}

TEST(GlobalLikelihood, Examples) {
  LinearGaussianModelD one({Eigen::MatrixXd::Identity(2, 2)}, Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d::Zero(),
                           Eigen::Matrix2d::Identity());
  auto g = global_likelihood_params(one);
  EXPECT_LT(max_abs(g.Sigma_tilde, Eigen::MatrixXd::Identity(2, 2)), 1e-15);
  EXPECT_LT(max_abs(g.Sigma_hat_inv, Eigen::MatrixXd::Identity(2, 2)), 1e-15);

  std::mt19937_64 rng(32);
  auto bd = test::random_model(rng, 2, 3, true);
  auto gb = global_likelihood_params(bd);
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t j = 0; j < 3; ++j) {
      const Eigen::MatrixXd blk = gb.Sigma_tilde.block(2 * k, 2 * j, 2, 2);
      if (k != j) {
        EXPECT_LT(blk.cwiseAbs().maxCoeff(), 1e-12);
      } else {
        const Eigen::MatrixXd& h = bd.H_blocks()[k];
        EXPECT_LT(max_abs(blk, (h.transpose() * bd.Sigma_block(k, k).inverse() * h).inverse()), 1e-10);
      }
    }
}

TEST(GlobalLikelihood, Example3SigmaTilde) {
  const int r0 = 4;
  const std::vector<int> r{1, 4, 4};
  auto g = global_likelihood_params(private_shared_model<double>(3, r0, r));
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j) {
      const double ref = k == j ? 1.0 / (r0 + r[k]) : static_cast<double>(r0) / ((r0 + r[k]) * (r0 + r[j]));
      EXPECT_NEAR(g.Sigma_tilde(k, j), ref, 1e-14);
    }
}

TEST(ScalarFusion, ConjugateUpdate) {
  LinearGaussianModelD m({Eigen::MatrixXd::Ones(1, 1)}, Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Zero(1),
                         Eigen::MatrixXd::Ones(1, 1));
  const Eigen::VectorXd y = Eigen::VectorXd::Constant(1, 2.0);
  auto r = scalar_fusion(m, local_statistics(m, y).t, std::optional<Eigen::VectorXd>(y));
  EXPECT_NEAR(r.posterior.mean()(0), 1.0, 1e-15);
  EXPECT_NEAR(r.posterior.cov()(0, 0), 0.5, 1e-15);
  // Grid cross-check.
  const Grid g = test::line(-8, 8, 2048);
  auto prior = test::normal_on(g, 0, 1);
  const Eigen::ArrayXd ell = g.coordinates(0).unaryExpr([](double t) { return test::normal_pdf(2.0, t, 1.0); });
  auto post = normalize(GridDensity::from_values(g, prior.values() * ell));
  EXPECT_NEAR(moments(post).mean(0), 1.0, 1e-6);
  EXPECT_NEAR(moments(post).cov(0, 0), 0.5, 1e-4);
  std::mt19937_64 rng(1);
  EXPECT_THROW(scalar_fusion(test::random_model(rng, 2, 2, false), Eigen::VectorXd(Eigen::VectorXd::Zero(4))), DimensionError);
}

TEST(ScalarFusion, BlockDiagonalEqualsOracle) {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 50; ++t) {
    auto m = test::random_model(rng, 1, 3, true);
    const Eigen::VectorXd y = test::random_vector(m.dim_y(), rng);
    auto r = scalar_fusion(m, local_statistics(m, y).t, std::optional<Eigen::VectorXd>(y));
    ASSERT_TRUE(r.oracle);
    EXPECT_NEAR(r.posterior.mean()(0), r.oracle->mean()(0), 1e-10);
    EXPECT_NEAR(r.posterior.cov()(0, 0), r.oracle->cov()(0, 0), 1e-10);
  }
}

TEST(ScalarFusion, LikelihoodProductIdentity) {
  std::mt19937_64 rng(34);
  auto m = test::random_model(rng, 1, 3, false);
  const Eigen::VectorXd y = test::random_vector(m.dim_y(), rng);
  const Eigen::VectorXd t = local_statistics(m, y).t;
  auto r = scalar_fusion(m, t);
  auto ops = local_operators(m);
  auto g = global_likelihood_params(m);
  std::vector<double> diff;
  for (double th = -3; th <= 3; th += 0.25) {
    double lw = 0;
    for (std::size_t k = 0; k < 3; ++k) lw += (*r.scalar_weights)(k) * (-0.5 * ops.M[k](0, 0) * (t(k) - th) * (t(k) - th));
    diff.push_back(lw - global_log_likelihood(g, t, Eigen::VectorXd::Constant(1, th)));
  }
  for (double d : diff) EXPECT_NEAR(d, diff.front(), 1e-8);
}

TEST(VectorFusion, MatchesScalarInOneDimension) {
  std::mt19937_64 rng(35);
  auto m = test::random_model(rng, 1, 4, false);
  const Eigen::VectorXd t = test::random_vector(4, rng);
  auto s = scalar_fusion(m, t);
  auto v = vector_fusion(m, t);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR((*v.vector_weights)[k](0, 0), (*s.scalar_weights)(k), 1e-12);
  EXPECT_NEAR(v.posterior.mean()(0), s.posterior.mean()(0), 1e-12);
  EXPECT_NEAR(v.posterior.cov()(0, 0), s.posterior.cov()(0, 0), 1e-12);
}

TEST(VectorFusion, MultiSensorBayes) {
  // Independent sensors with H_k = I, Σ_kk = σ_k² I.
  const double s1 = 0.5, s2 = 2.0;
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(4, 4);
  sigma.topLeftCorner(2, 2) = s1 * Eigen::Matrix2d::Identity();
  sigma.bottomRightCorner(2, 2) = s2 * Eigen::Matrix2d::Identity();
  const Eigen::Vector2d mu0(0.1, -0.2);
  const Eigen::Matrix2d c0 = 3.0 * Eigen::Matrix2d::Identity();
  LinearGaussianModelD m({Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2)}, sigma, mu0, c0);
  const Eigen::Vector4d y(1.0, 2.0, -1.0, 0.5);
  auto r = vector_fusion(m, local_statistics(m, y).t);
  const double prec = 1 / s1 + 1 / s2 + 1 / 3.0;
  const Eigen::Vector2d mean = (y.head<2>() / s1 + y.tail<2>() / s2 + mu0 / 3.0) / prec;
  EXPECT_LT((r.posterior.mean() - mean).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(max_abs(r.posterior.cov(), Eigen::Matrix2d::Identity() / prec), 1e-12);
}

TEST(VectorFusion, CorrelatedModelIdentities) {
  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 30; ++trial) {
    auto m = test::random_model(rng, 2, 3, false);
    const Eigen::VectorXd y = test::random_vector(m.dim_y(), rng);
    const auto ls = local_statistics(m, y);
    auto r = vector_fusion(m, ls.t, std::optional<Eigen::VectorXd>(y));
    ASSERT_TRUE(r.oracle);
    EXPECT_TRUE(is_positive_definite<double>(r.posterior.cov()));
    EXPECT_TRUE(is_positive_definite<double>(r.oracle->cov()));
    // Appendix-style mean identity.
    auto ops = local_operators(m);
    auto g = global_likelihood_params(m);
    const Eigen::MatrixXd j = replicated_identity<double>(3, 2);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2);
    for (std::size_t k = 0; k < 3; ++k) rhs += (*r.vector_weights)[k].transpose() * ops.M[k] * ls.t.segment(2 * k, 2);
    EXPECT_LT((j.transpose() * g.Sigma_tilde_inv * ls.t - rhs).cwiseAbs().maxCoeff(), 1e-10);
    // The substitution explains the gap to the oracle.
    auto sub = substituted_oracle(m, y);
    EXPECT_LT((sub.mean() - r.posterior.mean()).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT(max_abs(sub.cov(), r.posterior.cov()), 1e-10);
    // Fused likelihood of the vector rule is the global likelihood up to a constant.
    std::vector<double> diff;
    for (int p = 0; p < 6; ++p) {
      const Eigen::VectorXd th = test::random_vector(2, rng);
      diff.push_back(vector_rule_log_likelihood(m, r, y, th) - global_log_likelihood(g, ls.t, th));
    }
    for (double d : diff) EXPECT_NEAR(d, diff.front(), 1e-8 * std::max(1.0, std::abs(diff.front())));
  }
}

TEST(VectorFusion, CorrelatedDiffersFromOracle) {
  std::mt19937_64 rng(37);
  auto m = test::random_model(rng, 2, 3, false);
  const Eigen::VectorXd y = test::random_vector(m.dim_y(), rng);
  auto r = vector_fusion(m, local_statistics(m, y).t, std::optional<Eigen::VectorXd>(y));
  EXPECT_GT(max_abs(r.posterior.cov(), r.oracle->cov()), 1e-8);
}

TEST(PrivateShared, Example3) {
  auto w = private_shared_weights<double>(3, 4, {1, 4, 4});
  EXPECT_NEAR(w(0), -1.0 / 7.0, 1e-12);
  auto m = private_shared_model<double>(3, 4, {1, 4, 4});
  EXPECT_FALSE(m.sigma_positive_definite());
  auto r = scalar_fusion(m, Eigen::VectorXd(Eigen::VectorXd::Zero(3)));
  EXPECT_LT((*r.scalar_weights - w).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_FALSE(r.oracle);
}

TEST(PrivateShared, Limits) {
  EXPECT_EQ(private_shared_weights<double>(3, 0, {2, 2, 2}), Eigen::Vector3d::Ones());
  auto w = private_shared_weights<double>(3, 1000000, {5, 5, 5});
  EXPECT_LT((w.array() - 1.0 / 3.0).abs().maxCoeff(), 1e-5);
  auto m = private_shared_model<double>(2, 0, {3, 3});
  EXPECT_LT(m.Sigma_block(0, 1).cwiseAbs().maxCoeff(), 1e-300);
  auto m2 = private_shared_model<double>(2, 1, {1, 1});
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(global_likelihood_params(m2).Sigma_tilde);
  EXPECT_GT(es.eigenvalues().minCoeff(), 1e-6);
}

TEST(PrivateShared, FormulaMatchesMatrixWeights) {
  std::mt19937_64 rng(38);
  std::uniform_int_distribution<int> kd(2, 5), r0d(1, 10), rd(1, 8);
  for (int t = 0; t < 200; ++t) {
    const std::size_t K = static_cast<std::size_t>(kd(rng));
    const int r0 = r0d(rng);
    std::vector<int> r(K);
    for (auto& x : r) x = rd(rng);
    auto w = private_shared_weights<double>(K, r0, r);
    auto m = private_shared_model<double>(K, r0, r);
    EXPECT_LT((*scalar_fusion(m, Eigen::VectorXd(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(K)))).scalar_weights - w).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_GE(w.sum(), 1.0 - 1e-12);
    EXPECT_LE(w.sum(), static_cast<double>(K) + 1e-12);
    EXPECT_LE(w.maxCoeff(), 1.0);
  }
}

TEST(MultiplicativePosteriorFusion, ConditionallyIndependent) {
  const Grid g = test::line(-10, 10, 2048);
  // Scalar θ, prior N(0,2), agent k sees y_k ~ N(θ, s_k).
  const double v0 = 2.0;
  const std::vector<double> ys{0.7, -0.4}, ss{0.5, 1.5};
  std::vector<GridDensity> posts;
  double prec = 1 / v0, eta = 0;
  for (int k = 0; k < 2; ++k) {
    const double pk = 1 / v0 + 1 / ss[k];
    posts.push_back(test::normal_on(g, ys[k] / ss[k] / pk, 1 / pk));
    prec += 1 / ss[k];
    eta += ys[k] / ss[k];
  }
  auto f = multiplicative_posterior_fusion(test::normal_on(g, 0, v0), OpinionProfile(posts));
  EXPECT_LT(kl(f, test::normal_on(g, eta / prec, 1 / prec)), 1e-6);
  EXPECT_LT((multiplicative_posterior_fusion(test::normal_on(g, 0, v0), OpinionProfile({posts[0]})).values() - posts[0].values())
                .abs()
                .maxCoeff(),
            1e-12);
}

TEST(MultiplicativePosteriorFusion, Example3WeightsOnGrid) {
  // Local posteriors of the correlated model fused with the scalar-rule weights reproduce the closed form.
  auto m = private_shared_model<double>(3, 4, {1, 4, 4}, 0.0, 1.0);
  std::mt19937_64 rng(39);
  const Eigen::VectorXd y = test::random_vector(m.dim_y(), rng);
  const Eigen::VectorXd t = local_statistics(m, y).t;
  auto r = scalar_fusion(m, t);
  auto ops = local_operators(m);
  const Grid g = test::line(-6, 6, 2048);
  std::vector<GridDensity> posts;
  for (int k = 0; k < 3; ++k) {
    const double pk = 1.0 + ops.M[k](0, 0);
    posts.push_back(test::normal_on(g, ops.M[k](0, 0) * t(k) / pk, 1 / pk));
  }
  auto f = multiplicative_posterior_fusion(test::normal_on(g, 0, 1), OpinionProfile(posts), *r.scalar_weights);
  auto mo = moments(f);
  EXPECT_NEAR(mo.mean(0), r.posterior.mean()(0), 1e-4);
  EXPECT_NEAR(mo.cov(0, 0), r.posterior.cov()(0, 0), 1e-4);
}

TEST(ExpFam, SummationRule) {
  EXPECT_EQ(expfam_fuse_statistics<double>({Eigen::Vector2d(1, 2), Eigen::Vector2d(3, 4)}, Eigen::Vector2d::Zero()),
            Eigen::Vector2d(4, 6));
  EXPECT_EQ(expfam_fuse_statistics<double>({}, Eigen::Vector2d(1, 1)), Eigen::Vector2d(1, 1));
  EXPECT_THROW(expfam_fuse_statistics<double>({Eigen::Vector3d::Zero()}, Eigen::Vector2d::Zero()), DimensionError);
}

TEST(ExpFam, GaussianNaturalParameters) {
  std::mt19937_64 rng(40);
  auto m = test::random_model(rng, 2, 3, true);
  const Eigen::VectorXd y = test::random_vector(m.dim_y(), rng);
  std::vector<Eigen::VectorXd> tl;
  for (std::size_t k = 0; k < 3; ++k)
    tl.push_back(m.H_blocks()[k].transpose() * m.Sigma_block(k, k).inverse() * y.segment(m.offset(k), m.dim_y(k)));
  const Eigen::VectorXd t0 = m.prior().precision() * m.prior().mean();
  auto post = direct_posterior(m, y);
  EXPECT_LT((expfam_fuse_statistics(tl, t0) - post.precision() * post.mean()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Model, Validation) {
  Eigen::Matrix2d asym;
  asym << 1, 0.1, 0.2, 1;
  EXPECT_THROW(LinearGaussianModelD({Eigen::MatrixXd::Ones(2, 1)}, asym, Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Ones(1, 1)),
               ValueError);
  EXPECT_THROW(LinearGaussianModelD({Eigen::MatrixXd::Ones(2, 1)}, Eigen::Matrix3d::Identity(), Eigen::VectorXd::Zero(1),
                                    Eigen::MatrixXd::Ones(1, 1)),
               DimensionError);
}
