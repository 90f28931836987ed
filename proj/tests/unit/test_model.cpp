#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "taglm/errors.hpp"
#include "taglm/loss.hpp"
#include "taglm/model.hpp"

namespace taglm {
namespace {

TokenSeq random_tokens(int vocab, std::size_t steps, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> tok(0, vocab - 1);
  TokenSeq s;
  s.tokens.resize(steps);
  for (int& t : s.tokens) t = tok(rng);
  return s;
}

TEST(InitParams, ShapesFollowDims) {
  const ModelDims dims{7, 5, 6, 2};
  const auto p = init_params(dims, 1);
  EXPECT_EQ(p.dims(), dims);
  EXPECT_EQ(p.embedding.rows(), 7);
  EXPECT_EQ(p.embedding.cols(), 5);
  EXPECT_EQ(p.layers[0].w_forget.rows(), 6);
  EXPECT_EQ(p.layers[0].w_forget.cols(), 6 + 5);
  EXPECT_EQ(p.layers[1].w_output.cols(), 6 + 6);
  EXPECT_EQ(p.w_out.rows(), 7);
  EXPECT_EQ(p.w_out.cols(), 6);
  EXPECT_EQ(p.b_out.size(), 7);
  EXPECT_NO_THROW(p.validate());
}

TEST(InitParams, UniformWithinFanInBoundsAndForgetBiasOne) {
  const ModelDims dims{12, 8, 16, 2};
  const auto p = init_params(dims, 3);
  EXPECT_LE(p.embedding.cwiseAbs().maxCoeff(), 1.0);
  for (const auto& l : p.layers) {
    const double s = 1.0 / std::sqrt(static_cast<double>(l.w_forget.cols()));
    for (const Matrix* w : {&l.w_forget, &l.w_input, &l.w_candidate, &l.w_output}) {
      EXPECT_LE(w->cwiseAbs().maxCoeff(), s);
      EXPECT_GT(w->cwiseAbs().maxCoeff(), 0.8 * s);  // actually spread over the range
      EXPECT_NEAR(w->mean(), 0.0, 0.2 * s);
    }
    EXPECT_TRUE(l.b_forget.isOnes(0.0));
    EXPECT_TRUE(l.b_input.isZero(0.0));
    EXPECT_TRUE(l.b_candidate.isZero(0.0));
    EXPECT_TRUE(l.b_output.isZero(0.0));
  }
  EXPECT_LE(p.w_out.cwiseAbs().maxCoeff(), 1.0 / std::sqrt(16.0));
  EXPECT_TRUE(p.b_out.isZero(0.0));
}

TEST(InitParams, SeededAndDeterministic) {
  const ModelDims dims{6, 3, 4, 2};
  EXPECT_TRUE(bitwise_equal(init_params(dims, 9), init_params(dims, 9)));
  EXPECT_FALSE(bitwise_equal(init_params(dims, 9), init_params(dims, 10)));
}

TEST(ModelParams, ValidateRejectsUnchainedLayers) {
  auto p = ModelParams::zeros({5, 3, 4, 2});
  p.layers[1] = LstmLayerParams::zeros(4, 3);
  EXPECT_THROW(p.validate(), DimensionMismatch);
  EXPECT_THROW(ModelParams::zeros({0, 3, 4, 1}), DimensionMismatch);
}

TEST(ParamGroups, FixedOrderCoveringEveryArray) {
  auto p = ModelParams::zeros({5, 3, 4, 2});
  const auto groups = param_groups(p);
  std::vector<std::string> names;
  std::size_t total = 0;
  for (const auto& g : groups) {
    names.push_back(g.name);
    total += g.values.size();
  }
  EXPECT_EQ(names.front(), "embedding");
  EXPECT_EQ(names[1], "layer0.w_forget");
  EXPECT_EQ(names[5], "layer0.b_forget");
  EXPECT_EQ(names[9], "layer1.w_forget");
  EXPECT_EQ(names[names.size() - 2], "w_out");
  EXPECT_EQ(names.back(), "b_out");
  EXPECT_EQ(groups.size(), 1u + 2 * 8 + 2);
  const std::size_t expected = 5 * 3 + (4 * 4 * (4 + 3) + 4 * 4) + (4 * 4 * (4 + 4) + 4 * 4) + 5 * 4 + 5;
  EXPECT_EQ(total, expected);
  groups[0].values[2] = 4.5;  // views alias the matrices, column-major
  EXPECT_EQ(p.embedding(2, 0), 4.5);
}

TEST(Forward, RowsAreDistributions) {
  std::mt19937_64 rng(2);
  const auto p = init_params({9, 4, 6, 2}, 5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto pass = forward(random_tokens(9, 40, rng), p);
    ASSERT_EQ(pass.probs.rows(), 40);
    ASSERT_EQ(pass.probs.cols(), 9);
    for (Eigen::Index t = 0; t < 40; ++t) {
      EXPECT_NEAR(pass.probs.row(t).sum(), 1.0, 1e-9);
      EXPECT_GE(pass.probs.row(t).minCoeff(), 0.0);
      EXPECT_LE(pass.probs.row(t).maxCoeff(), 1.0);
    }
  }
}

TEST(Forward, ZeroParamsGiveUniformRows) {
  std::mt19937_64 rng(1);
  const auto p = ModelParams::zeros({7, 3, 5, 2});
  const auto pass = forward(random_tokens(7, 40, rng), p);
  for (Eigen::Index t = 0; t < 40; ++t)
    for (Eigen::Index k = 0; k < 7; ++k) EXPECT_NEAR(pass.probs(t, k), 1.0 / 7.0, 1e-15);
}

TEST(Forward, BitDeterministic) {
  std::mt19937_64 rng(6);
  const auto p = init_params({8, 4, 5, 2}, 2);
  const auto seq = random_tokens(8, 40, rng);
  const auto a = forward(seq, p).probs;
  const auto b = forward(seq, p).probs;
  EXPECT_EQ(std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())), 0);
}

TEST(Forward, BatchMembersMatchSingleSequences) {
  std::mt19937_64 rng(7);
  const auto p = init_params({8, 4, 5, 2}, 2);
  std::vector<TokenSeq> batch;
  for (int i = 0; i < 4; ++i) batch.push_back(random_tokens(8, 12, rng));
  const auto cache = forward_batch(batch, p);
  EXPECT_EQ(cache.batch(), 4);
  EXPECT_EQ(cache.steps(), 12u);
  for (int i = 0; i < 4; ++i) {
    EXPECT_TRUE(cache.prob_matrix(i).isApprox(forward(batch[static_cast<std::size_t>(i)], p).probs, 1e-14));
  }
}

TEST(Forward, RejectsBadBatches) {
  const auto p = init_params({5, 3, 4, 1}, 1);
  std::vector<TokenSeq> ragged{{{1, 2, 3}}, {{1, 2}}};
  EXPECT_THROW(forward_batch(ragged, p), DimensionMismatch);
  std::vector<TokenSeq> out_of_range{{{1, 5}}};
  EXPECT_THROW(forward_batch(out_of_range, p), DimensionMismatch);
  EXPECT_THROW(forward_batch({}, p), DimensionMismatch);
}

TEST(Backward, BatchGradientIsTheMeanOfMemberGradients) {
  std::mt19937_64 rng(12);
  const auto p = init_params({6, 3, 4, 2}, 4);
  std::vector<TokenSeq> inputs{random_tokens(6, 8, rng), random_tokens(6, 8, rng)};
  std::vector<TokenSeq> targets{random_tokens(6, 8, rng), random_tokens(6, 8, rng)};
  const auto joint = backward(p, forward_batch(inputs, p), targets, 0.7);
  const auto g0 = backward(p, forward(inputs[0], p).cache, std::span(targets).subspan(0, 1), 0.7);
  const auto g1 = backward(p, forward(inputs[1], p).cache, std::span(targets).subspan(1, 1), 0.7);
  const auto gj = param_groups(joint);
  const auto ga = param_groups(g0);
  const auto gb = param_groups(g1);
  for (std::size_t g = 0; g < gj.size(); ++g)
    for (std::size_t k = 0; k < gj[g].values.size(); ++k)
      ASSERT_NEAR(gj[g].values[k], 0.5 * (ga[g].values[k] + gb[g].values[k]), 1e-13) << gj[g].name;
}

TEST(Backward, RejectsMismatchedTargets) {
  std::mt19937_64 rng(1);
  const auto p = init_params({5, 3, 4, 1}, 1);
  std::vector<TokenSeq> inputs{random_tokens(5, 6, rng)};
  const auto cache = forward_batch(inputs, p);
  std::vector<TokenSeq> two{random_tokens(5, 6, rng), random_tokens(5, 6, rng)};
  EXPECT_THROW(backward(p, cache, two, 1.0), DimensionMismatch);
  std::vector<TokenSeq> shorter{random_tokens(5, 5, rng)};
  EXPECT_THROW(backward(p, cache, shorter, 1.0), DimensionMismatch);
}

}  // namespace
}  // namespace taglm
