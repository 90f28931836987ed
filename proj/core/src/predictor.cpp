#include "taglm/predictor.hpp"

#include <map>

#include "taglm/errors.hpp"

namespace taglm {
namespace {

PredictionResult from_probs(ProbMatrix probs, const Vocabulary& vocab) {
  PredictionResult r;
  r.tokens = argmax_rows(probs);
  r.confidence.reserve(r.tokens.size());
  for (std::size_t t = 0; t < r.tokens.size(); ++t) r.confidence.push_back(probs(static_cast<Eigen::Index>(t), r.tokens[t]));
  r.predicted_parent = decode(r.tokens, vocab);
  r.probs = std::move(probs);
  return r;
}

template <typename E>
[[noreturn]] void rethrow_at_depth(const E& e, int depth) {
  throw E("chain depth " + std::to_string(depth) + ": " + e.what());
}

}  // namespace

std::vector<int> argmax_rows(const ProbMatrix& probs) {
  std::vector<int> out(static_cast<std::size_t>(probs.rows()), 0);
  for (Eigen::Index t = 0; t < probs.rows(); ++t) {
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < probs.cols(); ++k) {
      if (probs(t, k) > probs(t, best)) best = k;
    }
    out[static_cast<std::size_t>(t)] = static_cast<int>(best);
  }
  return out;
}

PredictionResult predict_parent(const ModelParams& params, const Vocabulary& vocab, std::string_view child,
                                std::size_t window) {
  const TokenSeq input = encode(child, vocab, window);
  return from_probs(forward(input, params).probs, vocab);
}

std::vector<PredictionResult> predict_batch(const ModelParams& params, const Vocabulary& vocab,
                                            std::span<const std::string> children, std::size_t window,
                                            std::size_t batch_size) {
  std::vector<PredictionResult> out;
  out.reserve(children.size());
  std::vector<TokenSeq> inputs;
  for (std::size_t start = 0; start < children.size(); start += batch_size) {
    const std::size_t end = std::min(children.size(), start + batch_size);
    inputs.clear();
    for (std::size_t k = start; k < end; ++k) inputs.push_back(encode(children[k], vocab, window));
    const ForwardCache cache = forward_batch(inputs, params);
    for (Eigen::Index b = 0; b < cache.batch(); ++b) out.push_back(from_probs(cache.prob_matrix(b), vocab));
  }
  return out;
}

std::vector<ChainStep> predict_chain(const ModelParams& params, const Vocabulary& vocab, std::string_view leaf,
                                     const ChainOptions& options) {
  if (options.max_depth < 1) throw ConfigError("chain max depth must be at least 1");
  std::map<std::string, std::string, std::less<>> parents;
  if (options.mode == ChainMode::GroundTruth && !options.corpus) {
    throw ConfigError("ground-truth chains need a corpus");
  }
  if (options.corpus) {
    for (const auto& p : options.corpus->pairs()) parents.emplace(p.child, p.parent);
  }

  std::vector<ChainStep> chain;
  std::string child(leaf);
  for (int depth = 0; depth < options.max_depth; ++depth) {
    ChainStep step;
    step.depth = depth;
    step.child = child;
    if (const auto it = parents.find(child); it != parents.end()) step.truth = it->second;
    try {
      step.result = predict_parent(params, vocab, child, options.window);
    } catch (const UnknownChar& e) {
      if (depth == 0) rethrow_at_depth(e, depth);
      break;
    } catch (const TagTooLong& e) {
      if (depth == 0) rethrow_at_depth(e, depth);
      break;
    }
    chain.push_back(step);

    std::string next;
    if (options.mode == ChainMode::FedBack) {
      next = step.result.predicted_parent;
    } else if (step.truth) {
      next = *step.truth;
    }
    if (next.empty() || next == child) break;
    child = std::move(next);
  }
  return chain;
}

}  // namespace taglm
