#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "taglm/generator.hpp"
#include "taglm/levenshtein.hpp"
#include "taglm/loss.hpp"
#include "taglm/lstm.hpp"
#include "taglm/model.hpp"
#include "taglm/tokenizer.hpp"

namespace taglm {
namespace {

LstmLayerParams random_layer(Eigen::Index hidden, Eigen::Index input) {
  auto p = LstmLayerParams::zeros(hidden, input);
  for (Matrix* w : {&p.w_forget, &p.w_input, &p.w_candidate, &p.w_output}) w->setRandom();
  return p;
}

void BM_CellForward(benchmark::State& state) {
  const Eigen::Index hidden = state.range(0), batch = state.range(1);
  const auto p = random_layer(hidden, 32);
  const Matrix x = Matrix::Random(32, batch);
  const LstmState prev{Matrix::Zero(hidden, batch), Matrix::Zero(hidden, batch)};
  for (auto _ : state) benchmark::DoNotOptimize(lstm_cell_forward(x, prev, p));
}
BENCHMARK(BM_CellForward)->Args({128, 1})->Args({128, 32});

void BM_CellBackward(benchmark::State& state) {
  const Eigen::Index hidden = state.range(0), batch = state.range(1);
  const auto p = random_layer(hidden, 32);
  auto grads = LstmLayerParams::zeros(hidden, 32);
  const Matrix x = Matrix::Random(32, batch);
  const auto cache = lstm_cell_forward(x, {Matrix::Zero(hidden, batch), Matrix::Zero(hidden, batch)}, p);
  const Matrix dh = Matrix::Random(hidden, batch), dc = Matrix::Random(hidden, batch);
  for (auto _ : state) benchmark::DoNotOptimize(lstm_cell_backward(cache, dh, dc, p, grads));
}
BENCHMARK(BM_CellBackward)->Args({128, 32});

// One training step's worth of network work at the default model size.
void BM_ForwardBackwardBatch(benchmark::State& state) {
  const Corpus corpus = generate_corpus(GenConfig{});
  const Vocabulary vocab = build_vocab(corpus);
  const auto params = init_params({static_cast<int>(vocab.size()), 32, 128, 2}, 7);
  std::vector<TokenSeq> in, out;
  for (std::size_t k = 0; k < static_cast<std::size_t>(state.range(0)); ++k) {
    in.push_back(encode(corpus.pairs()[k].child, vocab));
    out.push_back(encode(corpus.pairs()[k].parent, vocab));
  }
  for (auto _ : state) {
    const auto cache = forward_batch(in, params);
    benchmark::DoNotOptimize(batch_loss(cache, out, 1.0));
    benchmark::DoNotOptimize(backward(params, cache, out, 1.0));
  }
}
BENCHMARK(BM_ForwardBackwardBatch)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Levenshtein(benchmark::State& state) {
  const std::string a = "KDU-NOFC-W256-01-10-AIT-1065", b = "KDU-NOFC-W145-01-10-AIT-1064";
  for (auto _ : state) benchmark::DoNotOptimize(levenshtein(a, b));
}
BENCHMARK(BM_Levenshtein);

}  // namespace
}  // namespace taglm

BENCHMARK_MAIN();
