#include "taglm/tokenizer.hpp"

#include <algorithm>
#include <stdexcept>

#include "taglm/errors.hpp"

namespace taglm {

Vocabulary::Vocabulary(std::string chars) : chars_(std::move(chars)) {
  index_.fill(-1);
  for (std::size_t i = 0; i < chars_.size(); ++i) {
    const auto c = static_cast<unsigned char>(chars_[i]);
    if (c == 0) throw std::invalid_argument("vocabulary may not contain NUL");
    if (index_[c] >= 0) throw std::invalid_argument("duplicate vocabulary character");
    index_[c] = static_cast<int>(i) + 1;
  }
}

int Vocabulary::token(char c) const {
  const int t = index_[static_cast<unsigned char>(c)];
  if (t < 0) throw UnknownChar(std::string("character '") + c + "' is not in the vocabulary");
  return t;
}

char Vocabulary::character(int token) const {
  if (token == kPadToken) return '\0';
  if (token < 0 || token >= static_cast<int>(size())) {
    throw UnknownChar("token " + std::to_string(token) + " is outside the vocabulary");
  }
  return chars_[token - 1];
}

Vocabulary build_vocab(const Corpus& corpus) {
  if (corpus.empty()) throw EmptyCorpus("cannot build a vocabulary from an empty corpus");
  std::array<bool, 256> seen{};
  for (const auto& p : corpus.pairs()) {
    for (const auto* s : {&p.child, &p.parent}) {
      for (char c : *s) seen[static_cast<unsigned char>(c)] = true;
    }
  }
  std::string chars;
  for (int c = 1; c < 256; ++c) {
    if (seen[c]) chars.push_back(static_cast<char>(c));
  }
  return Vocabulary(std::move(chars));
}

TokenSeq encode(std::string_view tag, const Vocabulary& vocab, std::size_t window) {
  if (tag.size() > window) {
    throw TagTooLong("tag '" + std::string(tag) + "' exceeds the " + std::to_string(window) + "-character window");
  }
  TokenSeq seq{std::vector<int>(window, kPadToken)};
  for (std::size_t i = 0; i < tag.size(); ++i) seq.tokens[i] = vocab.token(tag[tag.size() - 1 - i]);
  return seq;
}

std::string decode(std::span<const int> tokens, const Vocabulary& vocab) {
  std::string out;
  for (int t : tokens) {
    if (t != kPadToken) out.push_back(vocab.character(t));
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace taglm
