#include "taglm/evaluation.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "taglm/errors.hpp"
#include "taglm/predictor.hpp"

namespace taglm {
namespace {

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

struct Accumulator {
  std::size_t n = 0, exact = 0, total = 0;
  void add(std::size_t d) {
    ++n;
    total += d;
    exact += d == 0;
  }
  LevelMetrics metrics() const {
    if (n == 0) return {};
    return {n, static_cast<double>(total) / static_cast<double>(n), static_cast<double>(exact) / static_cast<double>(n)};
  }
};

}  // namespace

EvalReport evaluate(const ModelParams& params, const Vocabulary& vocab, const Corpus& test, std::size_t window) {
  if (test.empty()) throw EmptyCorpus("nothing to evaluate: the test corpus is empty");
  EvalReport report;

  std::vector<const TagPair*> usable;
  std::vector<std::string> children;
  for (const auto& p : test.pairs()) {
    try {
      (void)encode(p.child, vocab, window);
    } catch (const Error& e) {
      ++report.skipped;
      report.skipped_rows.emplace_back(p.child, e.what());
      continue;
    }
    usable.push_back(&p);
    children.push_back(p.child);
  }
  const auto predictions = predict_batch(params, vocab, children, window);

  Accumulator all;
  std::size_t baseline_total = 0;
  std::map<HierarchyLevel, Accumulator> levels;
  for (std::size_t k = 0; k < usable.size(); ++k) {
    const TagPair& pair = *usable[k];
    const PredictionResult& pred = predictions[k];
    EvalRow row{pair.child, pair.parent, pred.predicted_parent, diff_render(pair.parent, pred.predicted_parent),
                levenshtein(pair.parent, pred.predicted_parent), pair.is_self_pair()};
    if (row.self_pair) {
      ++report.self_pairs;
      report.rows.push_back(std::move(row));
      continue;
    }
    all.add(row.distance);
    ++report.histogram[row.distance];
    baseline_total += levenshtein(pair.parent, pair.child);
    if (is_valid_tag(pair.child)) {
      try {
        levels[classify_level(parse_tag(pair.child))].add(row.distance);
      } catch (const UnknownLevel&) {
      }
    }
    if (pair.parent.size() <= window) {
      for (std::size_t t = pair.parent.size(); t < pred.tokens.size(); ++t) report.pad_intrusions += pred.tokens[t] != kPadToken;
    }
    report.rows.push_back(std::move(row));
  }

  const auto m = all.metrics();
  report.n_pairs = m.n_pairs;
  report.mean_levenshtein = m.mean_levenshtein;
  report.exact_match_rate = m.exact_match_rate;
  report.baseline_mean_levenshtein = all.n ? static_cast<double>(baseline_total) / static_cast<double>(all.n) : 0.0;
  for (const auto& [level, acc] : levels) report.per_level[level] = acc.metrics();
  return report;
}

void write_report_csv(const EvalReport& report, std::ostream& out) {
  out << kReportCsvHeader << '\n';
  for (const auto& r : report.rows) {
    out << r.child << ',' << r.truth << ',' << r.prediction << ',' << r.differences << ',' << r.distance << '\n';
  }
}

void write_histogram_csv(const EvalReport& report, std::ostream& out) {
  out << kHistogramCsvHeader << '\n';
  for (const auto& [distance, count] : report.histogram) out << distance << ',' << count << '\n';
}

std::string format_summary(const EvalReport& r) {
  std::ostringstream out;
  out << "n_pairs " << r.n_pairs << '\n'
      << "skipped " << r.skipped << '\n'
      << "self_pairs " << r.self_pairs << '\n'
      << "mean_levenshtein " << shortest(r.mean_levenshtein) << '\n'
      << "exact_match_rate " << shortest(r.exact_match_rate) << '\n'
      << "baseline_mean_levenshtein " << shortest(r.baseline_mean_levenshtein) << '\n'
      << "pad_intrusions " << r.pad_intrusions << '\n'
      << "histogram";
  for (const auto& [distance, count] : r.histogram) out << ' ' << distance << ':' << count;
  out << '\n';
  for (const auto& [level, m] : r.per_level) {
    out << "level " << to_string(level) << " n=" << m.n_pairs << " mean=" << shortest(m.mean_levenshtein)
        << " exact=" << shortest(m.exact_match_rate) << '\n';
  }
  return out.str();
}

void write_report_files(const EvalReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  auto open = [&](const char* name) {
    std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + (dir / name).string());
    return f;
  };
  auto csv = open("report.csv");
  write_report_csv(report, csv);
  auto hist = open("histogram.csv");
  write_histogram_csv(report, hist);
  auto summary = open("summary.txt");
  summary << format_summary(report);
  if (!csv.flush() || !hist.flush() || !summary.flush()) throw IoError("failed writing report files");
}

}  // namespace taglm
