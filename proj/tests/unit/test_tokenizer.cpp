#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "taglm/errors.hpp"
#include "taglm/tokenizer.hpp"

namespace taglm {
namespace {

std::vector<int> padded(std::vector<int> head, std::size_t window = kDefaultWindow) {
  head.resize(window, kPadToken);
  return head;
}

TEST(BuildVocab, SortedCharactersAfterPad) {
  const auto v = build_vocab(Corpus({{"AB", "BA", "S"}}));
  EXPECT_EQ(v.size(), 3u);
  EXPECT_EQ(v.chars(), "AB");
  EXPECT_EQ(v.character(kPadToken), '\0');
  EXPECT_EQ(v.token('A'), 1);
  EXPECT_EQ(v.token('B'), 2);
}

TEST(BuildVocab, UsesChildAndParentCharacters) {
  const auto v = build_vocab(Corpus({{"A-1", "Z", "S"}}));
  EXPECT_EQ(v.chars(), "-1AZ");
}

TEST(BuildVocab, GeneratedCorpusHasHyphenAndDigits) {
  const auto v = build_vocab(testing::default_corpus());
  EXPECT_TRUE(v.contains('-'));
  for (char d = '0'; d <= '9'; ++d) EXPECT_TRUE(v.contains(d)) << d;
  EXPECT_EQ(v, build_vocab(testing::default_corpus()));
}

TEST(BuildVocab, EmptyCorpusThrows) { EXPECT_THROW(build_vocab(Corpus{}), EmptyCorpus); }

TEST(Vocabulary, CharTokenBijection) {
  const auto v = build_vocab(testing::default_corpus());
  for (std::size_t t = 1; t < v.size(); ++t) {
    const char c = v.character(static_cast<int>(t));
    EXPECT_NE(c, '\0');
    EXPECT_EQ(v.token(c), static_cast<int>(t));
  }
  EXPECT_THROW(v.token('a'), UnknownChar);
  EXPECT_THROW(v.character(static_cast<int>(v.size())), UnknownChar);
  EXPECT_THROW(v.character(-1), UnknownChar);
}

TEST(Encode, ReversesThenPads) {
  const Vocabulary v("AB");
  EXPECT_EQ(encode("AB", v).tokens, padded({2, 1}));
  EXPECT_EQ(encode("", v).tokens, padded({}));
}

TEST(Encode, FullWindowHasNoPadding) {
  const Vocabulary v("AB");
  const std::string t(40, 'A');
  const auto seq = encode(t, v);
  EXPECT_EQ(seq.size(), 40u);
  EXPECT_EQ(std::count(seq.tokens.begin(), seq.tokens.end(), kPadToken), 0);
  EXPECT_THROW(encode(t + "A", v), TagTooLong);
}

TEST(Encode, CustomWindow) {
  const Vocabulary v("AB");
  EXPECT_EQ(encode("AB", v, 3).tokens, (std::vector<int>{2, 1, 0}));
  EXPECT_THROW(encode("ABAB", v, 3), TagTooLong);
}

TEST(Encode, UnknownCharacterIsNamed) {
  const Vocabulary v("AB");
  try {
    encode("AXB", v);
    FAIL();
  } catch (const UnknownChar& e) {
    EXPECT_NE(std::string(e.what()).find("'X'"), std::string::npos) << e.what();
  }
}

TEST(Decode, InvertsEncode) {
  const Vocabulary v("AB");
  EXPECT_EQ(decode(padded({2, 1}), v), "AB");
  EXPECT_EQ(decode(padded({}), v), "");
}

TEST(Decode, DropsInteriorPad) {
  const Vocabulary v("AB");
  EXPECT_EQ(decode(padded({2, 0, 1, 0}), v), "AB");
}

TEST(TokenizerProperties, RoundTripOnGeneratedTags) {
  const auto& corpus = testing::default_corpus();
  const auto v = build_vocab(corpus);
  for (const auto& p : corpus.pairs()) {
    for (const auto& tag : {p.child, p.parent}) {
      const auto seq = encode(tag, v);
      ASSERT_EQ(seq.size(), kDefaultWindow);
      ASSERT_EQ(decode(seq.view(), v), tag);
      ASSERT_EQ(seq.tokens[0], v.token(tag.back()));
      // non-PAD tokens form a prefix
      const auto first_pad = std::find(seq.tokens.begin(), seq.tokens.end(), kPadToken);
      ASSERT_TRUE(std::all_of(first_pad, seq.tokens.end(), [](int t) { return t == kPadToken; }));
      ASSERT_EQ(static_cast<std::size_t>(first_pad - seq.tokens.begin()), tag.size());
      for (int t : seq.tokens) ASSERT_LT(static_cast<std::size_t>(t), v.size());
    }
  }
}

TEST(TokenizerProperties, EncodeInvertsDecodeOnPrefixSequences) {
  const Vocabulary v("-0123456789ABC");
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> len(0, 40);
  std::uniform_int_distribution<int> tok(1, static_cast<int>(v.size()) - 1);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<int> head(static_cast<std::size_t>(len(rng)));
    for (int& t : head) t = tok(rng);
    const auto seq = padded(head);
    ASSERT_EQ(encode(decode(seq, v), v).tokens, seq);
  }
}

}  // namespace
}  // namespace taglm
