#include "taglm_cli/cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "taglm/checkpoint.hpp"
#include "taglm/corpus.hpp"
#include "taglm/errors.hpp"
#include "taglm/evaluation.hpp"
#include "taglm/generator.hpp"
#include "taglm/keyvalue.hpp"
#include "taglm/levenshtein.hpp"
#include "taglm/predictor.hpp"
#include "taglm/trainer.hpp"

namespace taglm::cli {
namespace {

namespace fs = std::filesystem;

const std::vector<std::string> kGenKeys = {"facilities",    "seed",          "wells-min", "wells-max",
                                           "equipment-min", "equipment-max"};
const std::vector<std::string> kTrainKeys = {"epochs", "batch-size",  "lr",        "a",         "seed",
                                             "optimizer", "beta1",    "beta2",     "adam-epsilon",
                                             "eval-every", "embed-dim", "hidden",   "layers",
                                             "validation-fraction", "max-steps", "window"};

std::string shortest(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

// Flags that mirror config-file keys are kept as raw strings and handed to
// the same parsers the config file goes through.
struct KeyFlags {
  std::map<std::string, std::string> values;
  std::string config;

  void attach(CLI::App& app, const std::vector<std::string>& keys, const KeyValues& defaults) {
    app.add_option("--config", config, "key = value file; explicit flags override it");
    for (const auto& key : keys) {
      auto it = std::find_if(defaults.begin(), defaults.end(), [&](const auto& e) { return e.first == key; });
      app.add_option("--" + key, values[key], it == defaults.end() ? "" : "default " + it->second)
          ->type_name("VALUE");
    }
  }

  KeyValues collect(const CLI::App& app) const {
    KeyValues kv;
    if (!config.empty()) kv = read_key_values(config);
    for (const auto& [key, value] : values) {
      if (app.count("--" + key) == 0) continue;
      auto it = std::find_if(kv.begin(), kv.end(), [&](const auto& e) { return e.first == key; });
      if (it != kv.end()) {
        it->second = value;
      } else {
        kv.emplace_back(key, value);
      }
    }
    return kv;
  }
};

std::string join_sites(const std::set<std::string>& sites) {
  std::string out;
  for (const auto& s : sites) out += (out.empty() ? "" : " ") + s;
  return out;
}

// Rejects holdout sites the corpus does not contain before any work starts.
void check_sites(const Corpus& corpus, const std::vector<std::string>& holdout) {
  for (const auto& s : holdout) {
    if (!corpus.sites().count(s)) {
      throw SplitError("unknown site '" + s + "'; available sites: " + join_sites(corpus.sites()));
    }
  }
}

void ensure_parent_dir(const fs::path& path) {
  if (!path.has_parent_path()) return;
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
}

std::string token_label(const Vocabulary& vocab, int token) {
  return token == kPadToken ? std::string("<pad>") : std::string(1, vocab.character(token));
}

struct GenArgs {
  KeyFlags flags;
  std::string out;
};

int cmd_gen(const CLI::App& app, const GenArgs& args, std::ostream& out) {
  GenConfig cfg = gen_config_from_key_values(args.flags.collect(app));
  const Corpus corpus = generate_corpus(cfg);
  ensure_parent_dir(args.out);
  write_corpus_csv(corpus, fs::path(args.out));
  out << "pairs " << corpus.size() << '\n' << "sites " << join_sites(corpus.sites()) << '\n';
  return kExitOk;
}

struct TrainArgs {
  KeyFlags flags;
  std::string corpus;
  std::string out;
  std::string history;
  std::vector<std::string> holdout;
  bool verbose = false;
};

int cmd_train(const CLI::App& app, const TrainArgs& args, std::ostream& out, std::ostream& err) {
  const TrainConfig cfg = train_config_from_key_values(args.flags.collect(app));
  cfg.validate();
  Corpus corpus = load_corpus_csv(args.corpus);
  check_sites(corpus, args.holdout);
  if (!args.holdout.empty()) {
    corpus = split_by_site(corpus, {args.holdout.begin(), args.holdout.end()}).first;
  }

  auto observer = [&](const TrainProgress& p) {
    if (!args.verbose) return;
    if (p.validation_levenshtein) {
      err << "step " << p.step << " epoch " << p.epoch << " loss " << shortest(p.loss) << " val_levenshtein "
          << shortest(*p.validation_levenshtein) << '\n';
    }
  };
  const TrainResult result = train(corpus, cfg, observer);

  ensure_parent_dir(args.out);
  save_checkpoint({result.params, result.vocab, cfg}, args.out);

  const fs::path history_path = args.history.empty() ? fs::path(args.out + ".history.csv") : fs::path(args.history);
  ensure_parent_dir(history_path);
  std::ofstream hist(history_path, std::ios::binary | std::ios::trunc);
  if (!hist) throw IoError("cannot open " + history_path.string() + " for writing");
  hist << "step,loss,val_levenshtein\n";
  std::size_t probe = 0;
  for (std::size_t i = 0; i < result.history.loss.size(); ++i) {
    const long long step = static_cast<long long>(i) + 1;
    hist << step << ',' << shortest(result.history.loss[i]) << ',';
    while (probe < result.history.levenshtein.size() && result.history.levenshtein[probe].first < step) ++probe;
    if (probe < result.history.levenshtein.size() && result.history.levenshtein[probe].first == step) {
      hist << shortest(result.history.levenshtein[probe].second);
    }
    hist << '\n';
  }
  if (!hist.flush()) throw IoError("failed writing " + history_path.string());

  out << "steps " << result.history.loss.size() << '\n';
  out << "final_loss " << (result.history.loss.empty() ? std::string("nan") : shortest(result.history.loss.back()))
      << '\n';
  out << "validation_levenshtein "
      << (result.final_validation_levenshtein ? shortest(*result.final_validation_levenshtein) : std::string("none"))
      << '\n';
  out << "checkpoint " << args.out << '\n' << "history " << history_path.string() << '\n';
  return kExitOk;
}

struct PredictArgs {
  std::string model;
  std::string tag;
  bool probs = false;
  int top_k = 3;
};

int cmd_predict(const PredictArgs& args, std::ostream& out) {
  if (args.top_k < 1) throw ConfigError("--top-k must be at least 1");
  const Checkpoint ckpt = load_checkpoint(args.model);
  const PredictionResult r = predict_parent(ckpt.params, ckpt.vocab, args.tag, ckpt.config.window);
  out << r.predicted_parent << '\n';
  if (!args.probs) return kExitOk;

  const auto k = std::min<std::size_t>(static_cast<std::size_t>(args.top_k), ckpt.vocab.size());
  out << "position";
  for (std::size_t j = 0; j < k; ++j) out << "\ttop" << j + 1;
  out << '\n';
  std::vector<int> order(static_cast<std::size_t>(r.probs.cols()));
  for (Eigen::Index t = 0; t < r.probs.rows(); ++t) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return r.probs(t, a) > r.probs(t, b); });
    out << t;
    for (std::size_t j = 0; j < k; ++j) {
      std::ostringstream cell;
      cell << std::fixed << std::setprecision(6) << r.probs(t, order[j]);
      out << '\t' << token_label(ckpt.vocab, order[j]) << ':' << cell.str();
    }
    out << '\n';
  }
  return kExitOk;
}

struct ChainArgs {
  std::string model;
  std::string tag;
  std::string corpus;
  int max_depth = 6;
  bool ground_truth = false;
};

int cmd_chain(const ChainArgs& args, std::ostream& out) {
  if (args.ground_truth && args.corpus.empty()) throw ConfigError("--ground-truth needs --corpus");
  const Checkpoint ckpt = load_checkpoint(args.model);
  Corpus corpus;
  if (!args.corpus.empty()) corpus = load_corpus_csv(args.corpus);

  ChainOptions opts;
  opts.max_depth = args.max_depth;
  opts.mode = args.ground_truth ? ChainMode::GroundTruth : ChainMode::FedBack;
  opts.corpus = args.corpus.empty() ? nullptr : &corpus;
  opts.window = ckpt.config.window;
  const auto steps = predict_chain(ckpt.params, ckpt.vocab, args.tag, opts);

  out << "depth\tinput\tground_truth\tpredicted\tdifferences\tlevenshtein\n";
  for (const auto& s : steps) {
    out << s.depth << '\t' << s.child << '\t';
    if (s.truth) {
      out << *s.truth << '\t' << s.result.predicted_parent << '\t'
          << diff_render(*s.truth, s.result.predicted_parent) << '\t'
          << levenshtein(*s.truth, s.result.predicted_parent) << '\n';
    } else {
      out << "-\t" << s.result.predicted_parent << "\t-\t-\n";
    }
  }
  return kExitOk;
}

struct EvalArgs {
  std::string model;
  std::string corpus;
  std::string out_dir;
  std::vector<std::string> holdout;
};

int cmd_eval(const EvalArgs& args, std::ostream& out) {
  const Checkpoint ckpt = load_checkpoint(args.model);
  Corpus test = load_corpus_csv(args.corpus);
  check_sites(test, args.holdout);
  if (!args.holdout.empty()) {
    const std::set<std::string> wanted(args.holdout.begin(), args.holdout.end());
    Corpus picked;
    for (const auto& p : test.pairs()) {
      if (wanted.count(p.site_id)) picked.add(p);
    }
    test = std::move(picked);
  }
  if (test.empty()) throw EmptyCorpus("test set is empty");

  const EvalReport report = evaluate(ckpt.params, ckpt.vocab, test, ckpt.config.window);
  if (!args.out_dir.empty()) write_report_files(report, args.out_dir);
  out << format_summary(report);
  for (const auto& [child, reason] : report.skipped_rows) out << "skipped " << child << ": " << reason << '\n';
  return kExitOk;
}

int exit_code_for(const Error& e) {
  switch (e.category()) {
    case ErrorCategory::Usage: return kExitUsage;
    case ErrorCategory::Io: return kExitIo;
    case ErrorCategory::Numeric: return kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Predict parent functional-location tags with a character-level LSTM", "taglm"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "taglm 0.1.0");

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic tag corpus");
  gen_args.flags.attach(*gen, kGenKeys, gen_config_to_key_values(GenConfig{}));
  gen->add_option("--out", gen_args.out, "Corpus CSV to write")->required();

  TrainArgs train_args;
  auto* trn = app.add_subcommand("train", "Train a model on a corpus CSV");
  train_args.flags.attach(*trn, kTrainKeys, train_config_to_key_values(TrainConfig{}));
  trn->add_option("--corpus", train_args.corpus, "Corpus CSV")->required();
  trn->add_option("--out", train_args.out, "Checkpoint to write")->required();
  trn->add_option("--history", train_args.history, "Per-step history CSV (default <out>.history.csv)");
  trn->add_option("--holdout-site", train_args.holdout, "Site excluded from training (repeatable)");
  trn->add_flag("-v,--verbose", train_args.verbose, "Report validation probes on stderr");

  PredictArgs predict_args;
  auto* prd = app.add_subcommand("predict", "Predict the parent of one tag");
  prd->add_option("--model", predict_args.model, "Checkpoint")->required();
  prd->add_option("--tag", predict_args.tag, "Child tag")->required();
  prd->add_flag("--probs", predict_args.probs, "Print the per-position top-k probabilities");
  prd->add_option("--top-k", predict_args.top_k, "Entries per row for --probs")->capture_default_str();

  ChainArgs chain_args;
  auto* chn = app.add_subcommand("chain", "Walk up the hierarchy from a leaf tag");
  chn->add_option("--model", chain_args.model, "Checkpoint")->required();
  chn->add_option("--tag", chain_args.tag, "Leaf tag")->required();
  chn->add_option("--max-depth", chain_args.max_depth, "Maximum number of steps")->capture_default_str();
  chn->add_option("--corpus", chain_args.corpus, "Corpus CSV with the true parents");
  chn->add_flag("--ground-truth", chain_args.ground_truth, "Feed the true parent back instead of the prediction");

  EvalArgs eval_args;
  auto* evl = app.add_subcommand("eval", "Evaluate a model on held-out sites");
  evl->add_option("--model", eval_args.model, "Checkpoint")->required();
  evl->add_option("--corpus", eval_args.corpus, "Corpus CSV")->required();
  evl->add_option("--holdout-site", eval_args.holdout, "Site to evaluate (repeatable; default all)");
  evl->add_option("--out-dir", eval_args.out_dir, "Directory for report.csv, histogram.csv, summary.txt");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(*gen, gen_args, out);
    if (trn->parsed()) return cmd_train(*trn, train_args, out, err);
    if (prd->parsed()) return cmd_predict(predict_args, out);
    if (chn->parsed()) return cmd_chain(chain_args, out);
    if (evl->parsed()) return cmd_eval(eval_args, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}

}  // namespace taglm::cli
