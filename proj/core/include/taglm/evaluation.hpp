#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "taglm/corpus.hpp"
#include "taglm/levenshtein.hpp"
#include "taglm/model.hpp"
#include "taglm/tag.hpp"
#include "taglm/tokenizer.hpp"

namespace taglm {

struct EvalRow {
  std::string child;
  std::string truth;
  std::string prediction;
  std::string differences;
  std::size_t distance = 0;
  bool self_pair = false;
};

struct LevelMetrics {
  std::size_t n_pairs = 0;
  double mean_levenshtein = 0.0;
  double exact_match_rate = 0.0;
};

/// Aggregates cover every evaluated row except self pairs (child == parent),
/// which are only counted in `self_pairs`.
struct EvalReport {
  std::size_t n_pairs = 0;
  std::size_t skipped = 0;
  std::size_t self_pairs = 0;
  double mean_levenshtein = 0.0;
  double exact_match_rate = 0.0;
  // Mean distance when the child itself is offered as the parent.
  double baseline_mean_levenshtein = 0.0;
  // Non-PAD predictions at positions where the truth is PAD.
  std::size_t pad_intrusions = 0;
  std::map<std::size_t, std::size_t> histogram;
  std::map<HierarchyLevel, LevelMetrics> per_level;
  std::vector<EvalRow> rows;
  std::vector<std::pair<std::string, std::string>> skipped_rows;  // (child, reason)
};

/// Predicts every pair of `test` in corpus order. Pairs whose child cannot be
/// encoded are skipped and listed. Throws EmptyCorpus.
EvalReport evaluate(const ModelParams& params, const Vocabulary& vocab, const Corpus& test,
                    std::size_t window = kDefaultWindow);

inline constexpr const char* kReportCsvHeader = "child_tag,truth,prediction,differences,levenshtein";
inline constexpr const char* kHistogramCsvHeader = "distance,count";

void write_report_csv(const EvalReport& report, std::ostream& out);
void write_histogram_csv(const EvalReport& report, std::ostream& out);
std::string format_summary(const EvalReport& report);
/// Writes report.csv, histogram.csv and summary.txt into `dir`.
void write_report_files(const EvalReport& report, const std::filesystem::path& dir);

}  // namespace taglm
