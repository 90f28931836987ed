#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "taglm/corpus.hpp"
#include "taglm/model.hpp"
#include "taglm/tokenizer.hpp"

namespace taglm {

struct PredictionResult {
  std::string predicted_parent;
  ProbMatrix probs;                     // window x vocab
  std::vector<int> tokens;              // argmax per row
  std::vector<double> confidence;       // max probability per row
};

/// Row-wise argmax; ties go to the lowest token index.
std::vector<int> argmax_rows(const ProbMatrix& probs);

/// Greedy decode of the most probable character at every position.
/// Throws UnknownChar, TagTooLong.
PredictionResult predict_parent(const ModelParams& params, const Vocabulary& vocab, std::string_view child,
                                std::size_t window = kDefaultWindow);

/// Same as predict_parent for many tags, run through the network in batches.
std::vector<PredictionResult> predict_batch(const ModelParams& params, const Vocabulary& vocab,
                                            std::span<const std::string> children, std::size_t window = kDefaultWindow,
                                            std::size_t batch_size = 64);

enum class ChainMode {
  FedBack,      // each prediction becomes the next child
  GroundTruth,  // each known parent becomes the next child
};

struct ChainOptions {
  int max_depth = 6;
  ChainMode mode = ChainMode::FedBack;
  const Corpus* corpus = nullptr;  // known parents, reported as truth; required for GroundTruth
  std::size_t window = kDefaultWindow;
};

struct ChainStep {
  int depth = 0;
  std::string child;
  std::optional<std::string> truth;
  PredictionResult result;
};

/// Walks up the hierarchy from `leaf`. Stops at max_depth, an empty
/// prediction, a fixed point, or a next child that cannot be encoded.
/// Encoding errors at the leaf are rethrown with the chain depth prefixed.
std::vector<ChainStep> predict_chain(const ModelParams& params, const Vocabulary& vocab, std::string_view leaf,
                                     const ChainOptions& options);

}  // namespace taglm
