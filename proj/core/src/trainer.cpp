#include "taglm/trainer.hpp"

#include <charconv>
#include <cmath>
#include <numeric>

#include "taglm/errors.hpp"
#include "taglm/levenshtein.hpp"
#include "taglm/loss.hpp"
#include "taglm/predictor.hpp"

namespace taglm {
namespace {

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Separate streams so the validation split does not depend on epoch count.
constexpr std::uint64_t kSplitStream = 0x5851f42d4c957f2dULL;
constexpr std::uint64_t kShuffleStream = 0x14057b7ef767814fULL;

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 1) throw ConfigError("epochs must be at least 1");
  if (batch_size < 1) throw ConfigError("batch size must be at least 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  if (!(loss_penalty >= 0.0)) throw ConfigError("loss penalty a must be non-negative");
  if (eval_every < 0) throw ConfigError("eval_every must be non-negative");
  if (embed_dim < 1 || hidden < 1 || layers < 1) throw ConfigError("model dimensions must be positive");
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
    throw ConfigError("validation fraction must be in [0, 1)");
  }
  if (max_steps < 0) throw ConfigError("max_steps must be non-negative");
  if (window < 1) throw ConfigError("window must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0 && adam_epsilon > 0.0)) {
    throw ConfigError("invalid Adam hyperparameters");
  }
}

OptimizerConfig TrainConfig::optimizer_config() const {
  return {optimizer, learning_rate, beta1, beta2, adam_epsilon};
}

KeyValues train_config_to_key_values(const TrainConfig& c) {
  return {
      {"epochs", std::to_string(c.epochs)},
      {"batch-size", std::to_string(c.batch_size)},
      {"lr", shortest(c.learning_rate)},
      {"a", shortest(c.loss_penalty)},
      {"seed", std::to_string(c.seed)},
      {"optimizer", std::string(to_string(c.optimizer))},
      {"beta1", shortest(c.beta1)},
      {"beta2", shortest(c.beta2)},
      {"adam-epsilon", shortest(c.adam_epsilon)},
      {"eval-every", std::to_string(c.eval_every)},
      {"embed-dim", std::to_string(c.embed_dim)},
      {"hidden", std::to_string(c.hidden)},
      {"layers", std::to_string(c.layers)},
      {"validation-fraction", shortest(c.validation_fraction)},
      {"max-steps", std::to_string(c.max_steps)},
      {"window", std::to_string(c.window)},
  };
}

TrainConfig train_config_from_key_values(const KeyValues& kv, TrainConfig c) {
  for (const auto& [key, value] : kv) {
    if (key == "epochs") {
      c.epochs = parse_int(key, value);
    } else if (key == "batch-size") {
      c.batch_size = parse_int(key, value);
    } else if (key == "lr") {
      c.learning_rate = parse_double(key, value);
    } else if (key == "a") {
      c.loss_penalty = parse_double(key, value);
    } else if (key == "seed") {
      c.seed = parse_uint64(key, value);
    } else if (key == "optimizer") {
      c.optimizer = optimizer_from_string(value);
    } else if (key == "beta1") {
      c.beta1 = parse_double(key, value);
    } else if (key == "beta2") {
      c.beta2 = parse_double(key, value);
    } else if (key == "adam-epsilon") {
      c.adam_epsilon = parse_double(key, value);
    } else if (key == "eval-every") {
      c.eval_every = parse_int(key, value);
    } else if (key == "embed-dim") {
      c.embed_dim = parse_int(key, value);
    } else if (key == "hidden") {
      c.hidden = parse_int(key, value);
    } else if (key == "layers") {
      c.layers = parse_int(key, value);
    } else if (key == "validation-fraction") {
      c.validation_fraction = parse_double(key, value);
    } else if (key == "max-steps") {
      c.max_steps = static_cast<long long>(parse_uint64(key, value));
    } else if (key == "window") {
      c.window = static_cast<std::size_t>(parse_uint64(key, value));
    } else {
      throw ConfigError("unknown training config key '" + key + "'");
    }
  }
  return c;
}

void shuffle_indices(std::vector<std::size_t>& indices, std::mt19937_64& rng) {
  for (std::size_t i = indices.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(indices[i - 1], indices[pick(rng)]);
  }
}

std::vector<std::size_t> validation_indices(std::size_t n, double fraction, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed ^ kSplitStream);
  shuffle_indices(order, rng);
  order.resize(static_cast<std::size_t>(std::floor(static_cast<double>(n) * fraction)));
  std::sort(order.begin(), order.end());
  return order;
}

double mean_levenshtein(const ModelParams& params, const Vocabulary& vocab, const std::vector<TagPair>& pairs,
                        std::size_t window) {
  if (pairs.empty()) return 0.0;
  std::vector<std::string> children;
  children.reserve(pairs.size());
  for (const auto& p : pairs) children.push_back(p.child);
  const auto preds = predict_batch(params, vocab, children, window);
  double total = 0.0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    total += static_cast<double>(levenshtein(pairs[k].parent, preds[k].predicted_parent));
  }
  return total / static_cast<double>(pairs.size());
}

TrainResult train(const Corpus& corpus, const TrainConfig& cfg,
                  const std::function<void(const TrainProgress&)>& observer) {
  cfg.validate();
  if (corpus.empty()) throw EmptyCorpus("cannot train on an empty corpus");

  TrainResult result;
  result.vocab = build_vocab(corpus);

  const auto& pairs = corpus.pairs();
  const auto val_idx = validation_indices(pairs.size(), cfg.validation_fraction, cfg.seed);
  std::vector<bool> is_val(pairs.size(), false);
  for (auto k : val_idx) {
    is_val[k] = true;
    result.validation.push_back(pairs[k]);
  }

  std::vector<TokenSeq> inputs, targets;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (is_val[k]) continue;
    inputs.push_back(encode(pairs[k].child, result.vocab, cfg.window));
    targets.push_back(encode(pairs[k].parent, result.vocab, cfg.window));
  }
  if (inputs.empty()) throw EmptyCorpus("validation slice leaves no training pairs");

  const ModelDims dims{static_cast<int>(result.vocab.size()), cfg.embed_dim, cfg.hidden, cfg.layers};
  result.params = init_params(dims, cfg.seed);
  OptimizerState opt_state = OptimizerState::for_params(result.params);
  const OptimizerConfig opt_cfg = cfg.optimizer_config();

  std::mt19937_64 rng(cfg.seed ^ kShuffleStream);
  std::vector<std::size_t> order(inputs.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<TokenSeq> batch_in, batch_out;

  long long step = 0;
  bool done = false;
  for (int epoch = 0; epoch < cfg.epochs && !done; ++epoch) {
    shuffle_indices(order, rng);
    for (std::size_t start = 0; start < order.size() && !done; start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      batch_in.clear();
      batch_out.clear();
      for (std::size_t k = start; k < end; ++k) {
        batch_in.push_back(inputs[order[k]]);
        batch_out.push_back(targets[order[k]]);
      }

      const ForwardCache cache = forward_batch(batch_in, result.params);
      const double loss = batch_loss(cache, batch_out, cfg.loss_penalty);
      if (!std::isfinite(loss)) throw NonFiniteLoss("non-finite loss at optimizer step " + std::to_string(step + 1));
      const ModelParams grads = backward(result.params, cache, batch_out, cfg.loss_penalty);
      optimizer_step(result.params, grads, opt_state, opt_cfg);
      ++step;
      result.history.loss.push_back(loss);

      TrainProgress progress{step, epoch, loss, std::nullopt};
      if (cfg.eval_every > 0 && !result.validation.empty() && step % cfg.eval_every == 0) {
        const double lev = mean_levenshtein(result.params, result.vocab, result.validation, cfg.window);
        result.history.levenshtein.emplace_back(step, lev);
        progress.validation_levenshtein = lev;
      }
      if (observer) observer(progress);
      if (cfg.max_steps > 0 && step >= cfg.max_steps) done = true;
    }
  }

  if (!result.validation.empty()) {
    result.final_validation_levenshtein = mean_levenshtein(result.params, result.vocab, result.validation, cfg.window);
  }
  return result;
}

}  // namespace taglm
