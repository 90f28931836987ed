#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "taglm/corpus.hpp"

namespace taglm {

inline constexpr std::size_t kDefaultWindow = 40;
inline constexpr int kPadToken = 0;

/// Character <-> token bijection. Token 0 is PAD (the empty string); the
/// characters occupy tokens 1..size()-1 in the order given.
class Vocabulary {
 public:
  Vocabulary() { index_.fill(-1); }
  /// Throws std::invalid_argument on duplicate or NUL characters.
  explicit Vocabulary(std::string chars);

  std::size_t size() const noexcept { return chars_.size() + 1; }
  const std::string& chars() const noexcept { return chars_; }

  bool contains(char c) const noexcept { return index_[static_cast<unsigned char>(c)] >= 0; }
  /// Throws UnknownChar.
  int token(char c) const;
  /// '\0' for PAD. Throws UnknownChar for out-of-range tokens.
  char character(int token) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.chars_ == b.chars_; }

 private:
  std::string chars_;
  std::array<int, 256> index_{};
};

/// Fixed-length token vector; non-PAD tokens form a prefix.
struct TokenSeq {
  std::vector<int> tokens;

  std::size_t size() const noexcept { return tokens.size(); }
  std::span<const int> view() const noexcept { return tokens; }
  friend bool operator==(const TokenSeq&, const TokenSeq&) = default;
};

/// Every character of every child and parent tag, ascending. Throws EmptyCorpus.
Vocabulary build_vocab(const Corpus& corpus);

/// Reversed tag followed by PAD up to `window`. Throws TagTooLong, UnknownChar.
TokenSeq encode(std::string_view tag, const Vocabulary& vocab, std::size_t window = kDefaultWindow);

/// Inverse of encode. PAD tokens anywhere in the sequence are dropped.
std::string decode(std::span<const int> tokens, const Vocabulary& vocab);

}  // namespace taglm
