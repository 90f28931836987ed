#include <gtest/gtest.h>

#include <random>

#include "taglm/errors.hpp"
#include "taglm/predictor.hpp"

namespace taglm {
namespace {

// A model that ignores its input and always emits `favourite` (or PAD when
// the output bias is zero, since ties go to the lowest index).
ModelParams constant_model(const Vocabulary& vocab, int favourite) {
  auto p = ModelParams::zeros({static_cast<int>(vocab.size()), 2, 3, 1});
  if (favourite >= 0) p.b_out(favourite) = 5.0;
  return p;
}

TEST(ArgmaxRows, TiesGoToTheLowestIndex) {
  ProbMatrix p(3, 4);
  p << 0.25, 0.25, 0.25, 0.25,  //
      0.1, 0.4, 0.4, 0.1,       //
      0.0, 0.2, 0.3, 0.5;
  EXPECT_EQ(argmax_rows(p), (std::vector<int>{0, 1, 3}));
}

TEST(PredictParent, UniformModelPredictsTheEmptyTag) {
  const Vocabulary vocab("AB");
  const auto r = predict_parent(constant_model(vocab, -1), vocab, "AB");
  EXPECT_EQ(r.predicted_parent, "");
  ASSERT_EQ(r.confidence.size(), kDefaultWindow);
  for (double c : r.confidence) EXPECT_NEAR(c, 1.0 / 3.0, 1e-15);
}

TEST(PredictParent, IsDecodeOfRowArgmax) {
  const Vocabulary vocab("-0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ");
  const auto params = init_params({static_cast<int>(vocab.size()), 4, 6, 2}, 3);
  for (const char* tag : {"KDU-NOFC-W256-01-10-PSV-1000", "KDU", "KDU-W256-0010"}) {
    const auto r = predict_parent(params, vocab, tag);
    const auto pass = forward(encode(tag, vocab), params);
    EXPECT_EQ(r.predicted_parent, decode(argmax_rows(pass.probs), vocab));
    EXPECT_EQ(r.tokens, argmax_rows(pass.probs));
    EXPECT_TRUE(r.probs.isApprox(pass.probs, 0.0));
    for (Eigen::Index t = 0; t < r.probs.rows(); ++t) {
      EXPECT_NEAR(r.probs.row(t).sum(), 1.0, 1e-9);
      EXPECT_EQ(r.confidence[static_cast<std::size_t>(t)], r.probs.row(t).maxCoeff());
      EXPECT_GT(r.confidence[static_cast<std::size_t>(t)], 0.0);
      EXPECT_LE(r.confidence[static_cast<std::size_t>(t)], 1.0);
    }
    // deterministic
    EXPECT_EQ(predict_parent(params, vocab, tag).predicted_parent, r.predicted_parent);
  }
}

TEST(PredictParent, RejectsUnencodableTags) {
  const Vocabulary vocab("AB");
  const auto params = constant_model(vocab, 1);
  EXPECT_THROW(predict_parent(params, vocab, "ABC"), UnknownChar);
  EXPECT_THROW(predict_parent(params, vocab, std::string(41, 'A')), TagTooLong);
}

TEST(PredictBatch, MatchesOneByOnePrediction) {
  const Vocabulary vocab("-0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ");
  const auto params = init_params({static_cast<int>(vocab.size()), 4, 6, 2}, 9);
  std::vector<std::string> tags;
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> ch(0, vocab.chars().size() - 1);
  for (int i = 0; i < 70; ++i) {
    std::string t(1 + static_cast<std::size_t>(i % 40), 'A');
    for (char& c : t) c = vocab.chars()[ch(rng)];
    tags.push_back(t);
  }
  const auto batched = predict_batch(params, vocab, tags, kDefaultWindow, 16);
  ASSERT_EQ(batched.size(), tags.size());
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const auto single = predict_parent(params, vocab, tags[i]);
    EXPECT_EQ(batched[i].predicted_parent, single.predicted_parent);
    EXPECT_TRUE(batched[i].probs.isApprox(single.probs, 1e-14));
  }
}

TEST(PredictChain, MaxDepthOneGivesOneStep) {
  const Vocabulary vocab("AB");
  const auto chain = predict_chain(constant_model(vocab, 1), vocab, "AB", {.max_depth = 1});
  ASSERT_EQ(chain.size(), 1u);
  EXPECT_EQ(chain[0].depth, 0);
  EXPECT_EQ(chain[0].child, "AB");
  EXPECT_EQ(chain[0].result.predicted_parent, std::string(40, 'A'));
}

TEST(PredictChain, FixedPointStopsTheChain) {
  const Vocabulary vocab("AB");
  const auto chain = predict_chain(constant_model(vocab, 1), vocab, "A", {.max_depth = 5, .window = 1});
  ASSERT_EQ(chain.size(), 1u);
  EXPECT_EQ(chain[0].result.predicted_parent, "A");
}

TEST(PredictChain, EmptyPredictionStopsTheChain) {
  const Vocabulary vocab("AB");
  EXPECT_EQ(predict_chain(constant_model(vocab, -1), vocab, "AB", {.max_depth = 5}).size(), 1u);
}

TEST(PredictChain, FedBackPredictionsBecomeTheNextChild) {
  const Vocabulary vocab("AB");
  const auto chain = predict_chain(constant_model(vocab, 2), vocab, "A", {.max_depth = 3, .window = 2});
  ASSERT_EQ(chain.size(), 2u);  // "A" -> "BB" -> "BB" (fixed point)
  EXPECT_EQ(chain[1].child, "BB");
  EXPECT_EQ(chain[1].result.predicted_parent, "BB");
}

TEST(PredictChain, GroundTruthModeWalksTheCorpus) {
  const Vocabulary vocab("AB");
  const Corpus corpus({{"AAA", "AA", "S"}, {"AA", "A", "S"}});
  const auto params = constant_model(vocab, 2);
  const auto chain =
      predict_chain(params, vocab, "AAA", {.max_depth = 6, .mode = ChainMode::GroundTruth, .corpus = &corpus});
  ASSERT_EQ(chain.size(), 3u);
  EXPECT_EQ(chain[0].truth, "AA");
  EXPECT_EQ(chain[1].child, "AA");
  EXPECT_EQ(chain[2].child, "A");
  EXPECT_FALSE(chain[2].truth.has_value());

  // fed-back chains still report known truths
  const auto fed = predict_chain(params, vocab, "AAA", {.max_depth = 6, .corpus = &corpus});
  EXPECT_EQ(fed[0].truth, "AA");
}

TEST(PredictChain, ValidatesOptionsAndAnnotatesLeafErrors) {
  const Vocabulary vocab("AB");
  const auto params = constant_model(vocab, 1);
  EXPECT_THROW(predict_chain(params, vocab, "AB", {.max_depth = 0}), ConfigError);
  EXPECT_THROW(predict_chain(params, vocab, "AB", {.mode = ChainMode::GroundTruth}), ConfigError);
  try {
    predict_chain(params, vocab, "AXB", {});
    FAIL();
  } catch (const UnknownChar& e) {
    EXPECT_NE(std::string(e.what()).find("depth 0"), std::string::npos) << e.what();
  }
}

TEST(PredictChain, NeverExceedsMaxDepth) {
  const Vocabulary vocab("-0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ");
  const auto params = init_params({static_cast<int>(vocab.size()), 4, 6, 2}, 4);
  for (int depth = 1; depth <= 6; ++depth) {
    EXPECT_LE(predict_chain(params, vocab, "KDU-NOFC-W256-01-10-PSV-1000", {.max_depth = depth}).size(),
              static_cast<std::size_t>(depth));
  }
}

}  // namespace
}  // namespace taglm
