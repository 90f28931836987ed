#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "taglm/errors.hpp"
#include "taglm/loss.hpp"
#include "taglm/model.hpp"

namespace taglm {
namespace {

// Rows drawn from a Dirichlet-like recipe; roughly one row in ten gets an
// exact zero so the log clamp is exercised.
ProbMatrix random_probs(Eigen::Index rows, Eigen::Index vocab, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::bernoulli_distribution zero(0.1);
  ProbMatrix p(rows, vocab);
  for (Eigen::Index t = 0; t < rows; ++t) {
    for (Eigen::Index k = 0; k < vocab; ++k) p(t, k) = zero(rng) ? 0.0 : e(rng);
    if (p.row(t).sum() == 0.0) p(t, 0) = 1.0;
    p.row(t) /= p.row(t).sum();
  }
  return p;
}

std::vector<int> random_target(Eigen::Index rows, Eigen::Index vocab, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> tok(0, static_cast<int>(vocab) - 1);
  std::vector<int> t(static_cast<std::size_t>(rows));
  for (int& x : t) x = tok(rng);
  return t;
}

// Textbook categorical cross-entropy with a one-hot target vector.
double cross_entropy_oracle(const ProbMatrix& p, const std::vector<int>& target) {
  double total = 0.0;
  for (Eigen::Index t = 0; t < p.rows(); ++t) {
    for (Eigen::Index k = 0; k < p.cols(); ++k) {
      const double y = k == target[static_cast<std::size_t>(t)] ? 1.0 : 0.0;
      if (y != 0.0) total -= y * std::log(std::max(p(t, k), 1e-12));
    }
  }
  return total;
}

Vector softmax(const Vector& z) {
  const Vector e = (z.array() - z.maxCoeff()).exp();
  return e / e.sum();
}

TEST(PenalizedCrossEntropy, PerfectPredictionIsZero) {
  ProbMatrix p = ProbMatrix::Zero(3, 4);
  p(0, 1) = p(1, 0) = p(2, 3) = 1.0;
  const std::vector<int> target{1, 0, 3};
  for (double a : {0.0, 1.0, 7.5}) EXPECT_EQ(penalized_cross_entropy(p, target, a), 0.0);
}

TEST(PenalizedCrossEntropy, HandSubstitution) {
  ProbMatrix p(1, 2);
  p << 0.5, 0.5;
  const std::vector<int> target{0};
  EXPECT_NEAR(penalized_cross_entropy(p, target, 1.0), 1.1931471805599454, 1e-15);
  EXPECT_NEAR(penalized_cross_entropy(p, target, 0.0), std::log(2.0), 1e-15);
}

TEST(PenalizedCrossEntropy, ZeroPenaltyIsCrossEntropy) {
  std::mt19937_64 rng(2024);
  for (int draw = 0; draw < 100; ++draw) {
    const auto p = random_probs(40, 12, rng);
    const auto target = random_target(40, 12, rng);
    EXPECT_NEAR(penalized_cross_entropy(p, target, 0.0), cross_entropy_oracle(p, target), 1e-12) << draw;
  }
}

TEST(PenalizedCrossEntropy, MatchesTermByTermSum) {
  std::mt19937_64 rng(77);
  for (int draw = 0; draw < 100; ++draw) {
    const auto p = random_probs(10, 6, rng);
    const auto target = random_target(10, 6, rng);
    const double a = std::uniform_real_distribution<double>(0.0, 3.0)(rng);
    double expected = 0.0;
    for (Eigen::Index t = 0; t < 10; ++t)
      for (Eigen::Index k = 0; k < 6; ++k) {
        const double y = k == target[static_cast<std::size_t>(t)] ? 1.0 : 0.0;
        expected += -y * std::log(std::max(p(t, k), 1e-12)) + a * (1.0 - y) * p(t, k);
      }
    EXPECT_NEAR(penalized_cross_entropy(p, target, a), expected, 1e-12);
  }
}

TEST(PenalizedCrossEntropy, NonNegativeForNonNegativePenalty) {
  std::mt19937_64 rng(5);
  for (int draw = 0; draw < 500; ++draw) {
    const auto p = random_probs(8, 5, rng);
    const auto target = random_target(8, 5, rng);
    for (double a : {0.0, 0.1, 1.0, 10.0}) EXPECT_GE(penalized_cross_entropy(p, target, a), 0.0);
  }
}

TEST(PenalizedCrossEntropy, ClampKeepsZeroProbabilityFinite) {
  ProbMatrix p(1, 2);
  p << 0.0, 1.0;
  const std::vector<int> target{0};
  EXPECT_NEAR(penalized_cross_entropy(p, target, 1.0), -std::log(1e-12) + 1.0, 1e-12);
}

TEST(PenalizedCrossEntropy, RejectsBadTargets) {
  ProbMatrix p(2, 3);
  p.setConstant(1.0 / 3.0);
  EXPECT_THROW(penalized_cross_entropy(p, std::vector<int>{0}, 1.0), DimensionMismatch);
  EXPECT_THROW(penalized_cross_entropy(p, std::vector<int>{0, 3}, 1.0), DimensionMismatch);
}

TEST(LogitGradient, MatchesFiniteDifferencesThroughSoftmax) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> n(0.0, 2.0);
  for (int draw = 0; draw < 50; ++draw) {
    Vector z(7);
    for (Eigen::Index k = 0; k < 7; ++k) z(k) = n(rng);
    const int target = draw % 7;
    const double a = 0.25 * (draw % 5);
    const Vector g = logit_gradient(softmax(z), target, a);
    for (Eigen::Index k = 0; k < 7; ++k) {
      Vector up = z, down = z;
      up(k) += 1e-6;
      down(k) -= 1e-6;
      const double numeric = (position_loss(softmax(up), target, a) - position_loss(softmax(down), target, a)) / 2e-6;
      EXPECT_NEAR(g(k), numeric, 1e-7);
    }
  }
}

// Once the target logit dominates, pushing it further only shrinks the gradient.
TEST(LogitGradient, NormShrinksAsTargetLogitGrows) {
  for (double a : {0.0, 1.0, 3.0}) {
    double previous = std::numeric_limits<double>::infinity();
    for (double scale = 4.0; scale <= 30.0; scale += 0.5) {
      Vector z = Vector::Zero(6);
      z(2) = scale;
      z(4) = 0.3 * scale;
      const double norm = logit_gradient(softmax(z), 2, a).norm();
      EXPECT_LT(norm, previous) << "a=" << a << " scale=" << scale;
      previous = norm;
    }
  }
}

// With a = 0 and a PAD target the position loss is -log p_PAD: only the PAD
// probability matters, so the logit gradient is exactly p - e_PAD.
TEST(LogitGradient, PadTargetOnlyActsThroughThePadClass) {
  Vector p(4);
  p << 0.1, 0.2, 0.3, 0.4;
  const double base = position_loss(p, kPadToken, 0.0);
  for (Eigen::Index k = 1; k < 4; ++k) {
    Vector q = p;
    q(k) += 0.05;
    EXPECT_EQ(position_loss(q, kPadToken, 0.0), base);
  }
  Vector expected = p;
  expected(kPadToken) -= 1.0;
  EXPECT_TRUE(logit_gradient(p, kPadToken, 0.0).isApprox(expected, 1e-15));

  // and the same structure shows up in the output-bias gradient of the model
  const auto params = init_params({4, 3, 5, 1}, 8);
  const std::vector<TokenSeq> input{{{2}}};
  const std::vector<TokenSeq> target{{{kPadToken}}};
  const auto pass = forward(input[0], params);
  const auto grads = backward(params, pass.cache, target, 0.0);
  Vector want = pass.probs.row(0).transpose();
  want(kPadToken) -= 1.0;
  EXPECT_TRUE(grads.b_out.isApprox(want, 1e-14));
}

TEST(BatchLoss, IsTheMeanOfMemberLosses) {
  std::mt19937_64 rng(3);
  const auto params = init_params({6, 3, 4, 2}, 1);
  std::uniform_int_distribution<int> tok(0, 5);
  std::vector<TokenSeq> in(3), tgt(3);
  for (auto* v : {&in, &tgt})
    for (auto& s : *v) {
      s.tokens.resize(10);
      for (int& t : s.tokens) t = tok(rng);
    }
  const auto cache = forward_batch(in, params);
  double sum = 0.0;
  for (std::size_t b = 0; b < 3; ++b) sum += penalized_cross_entropy(cache.prob_matrix(static_cast<Eigen::Index>(b)), tgt[b].view(), 1.0);
  EXPECT_NEAR(batch_loss(cache, tgt, 1.0), sum / 3.0, 1e-12);
}

}  // namespace
}  // namespace taglm
