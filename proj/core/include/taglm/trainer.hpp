#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "taglm/corpus.hpp"
#include "taglm/keyvalue.hpp"
#include "taglm/model.hpp"
#include "taglm/optimizer.hpp"
#include "taglm/tokenizer.hpp"

namespace taglm {

struct TrainConfig {
  int epochs = 30;
  int batch_size = 32;
  double learning_rate = 1e-3;
  double loss_penalty = 1.0;  // the `a` of the penalized cross-entropy
  std::uint64_t seed = 7;
  OptimizerKind optimizer = OptimizerKind::Adam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  int eval_every = 200;  // optimizer steps between validation probes; 0 disables
  int embed_dim = 32;
  int hidden = 128;
  int layers = 2;
  double validation_fraction = 0.05;
  long long max_steps = 0;  // 0 = run all epochs
  std::size_t window = kDefaultWindow;

  /// Throws ConfigError.
  void validate() const;
  OptimizerConfig optimizer_config() const;
};

KeyValues train_config_to_key_values(const TrainConfig& cfg);
/// Starts from `base` and overrides the keys present. Throws ConfigError on unknown keys.
TrainConfig train_config_from_key_values(const KeyValues& kv, TrainConfig base = {});

struct TrainHistory {
  std::vector<double> loss;                              // one entry per optimizer step
  std::vector<std::pair<long long, double>> levenshtein;  // (step, mean validation distance)
};

struct TrainProgress {
  long long step = 0;
  int epoch = 0;
  double loss = 0.0;
  std::optional<double> validation_levenshtein;
};

struct TrainResult {
  ModelParams params;
  Vocabulary vocab;
  TrainHistory history;
  std::vector<TagPair> validation;
  std::optional<double> final_validation_levenshtein;
};

/// Indices of the validation slice: the first floor(n * fraction) entries of a
/// seeded permutation of 0..n-1, returned in ascending order.
std::vector<std::size_t> validation_indices(std::size_t n, double fraction, std::uint64_t seed);

/// Seeded Fisher-Yates shuffle.
void shuffle_indices(std::vector<std::size_t>& indices, std::mt19937_64& rng);

/// Mean greedy-decoding edit distance over `pairs`.
double mean_levenshtein(const ModelParams& params, const Vocabulary& vocab, const std::vector<TagPair>& pairs,
                        std::size_t window);

/// Throws EmptyCorpus, NonFiniteLoss, ConfigError.
TrainResult train(const Corpus& corpus, const TrainConfig& cfg,
                  const std::function<void(const TrainProgress&)>& observer = {});

}  // namespace taglm
