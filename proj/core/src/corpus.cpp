#include "taglm/corpus.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "taglm/errors.hpp"
#include "taglm/keyvalue.hpp"
#include "taglm/tag.hpp"

namespace taglm {

Corpus::Corpus(std::vector<TagPair> pairs) : pairs_(std::move(pairs)) {
  for (const auto& p : pairs_) sites_.insert(p.site_id);
}

void Corpus::add(TagPair pair) {
  sites_.insert(pair.site_id);
  pairs_.push_back(std::move(pair));
}

void write_corpus_csv(const Corpus& corpus, std::ostream& out) {
  out << kCorpusCsvHeader << '\n';
  for (const auto& p : corpus.pairs()) out << p.child << ',' << p.parent << ',' << p.site_id << '\n';
}

void write_corpus_csv(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_corpus_csv(corpus, out);
  if (!out.flush()) throw IoError("failed writing " + path.string());
}

Corpus read_corpus_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw CsvFormatError("missing header line");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  bool has_site = false;
  if (line == kCorpusCsvHeader) {
    has_site = true;
  } else if (line != "child_tag,parent_tag") {
    throw CsvFormatError("bad header '" + line + "', expected '" + kCorpusCsvHeader + "'");
  }
  const std::size_t columns = has_site ? 3 : 2;

  Corpus corpus;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != columns) {
      throw CsvFormatError("row " + std::to_string(line_no) + ": expected " + std::to_string(columns) +
                           " columns, got " + std::to_string(fields.size()));
    }
    ParsedTag child, parent;
    try {
      child = parse_tag(fields[0]);
      parent = parse_tag(fields[1]);
    } catch (const MalformedTag& e) {
      throw MalformedTag("row " + std::to_string(line_no) + ": " + e.what());
    }
    std::string site;
    if (has_site) {
      site = fields[2];
      if (site.empty()) throw CsvFormatError("row " + std::to_string(line_no) + ": empty site_id");
    } else {
      site = child.size() >= 3 ? child.segments[2] : child.raw;
    }
    corpus.add({child.raw, parent.raw, std::move(site)});
  }
  return corpus;
}

Corpus load_corpus_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus " + path.string());
  return read_corpus_csv(in);
}

std::pair<Corpus, Corpus> split_by_site(const Corpus& corpus, const std::set<std::string>& holdout_sites) {
  if (holdout_sites.empty()) throw SplitError("no holdout site given");
  for (const auto& s : holdout_sites) {
    if (!corpus.sites().count(s)) throw SplitError("holdout site '" + s + "' is not in the corpus");
  }
  if (holdout_sites.size() >= corpus.sites().size()) {
    throw SplitError("holding out every site leaves nothing to train on");
  }
  Corpus train, test;
  for (const auto& p : corpus.pairs()) {
    if (holdout_sites.count(p.site_id)) {
      test.add(p);
    } else {
      train.add(p);
    }
  }
  return {std::move(train), std::move(test)};
}

}  // namespace taglm
