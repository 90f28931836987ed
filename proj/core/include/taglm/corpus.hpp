#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace taglm {

/// One training or evaluation example: a child tag and the tag of the asset
/// it belongs to, labelled with the site it was drawn from.
struct TagPair {
  std::string child;
  std::string parent;
  std::string site_id;

  bool is_self_pair() const noexcept { return child == parent; }
  friend bool operator==(const TagPair&, const TagPair&) = default;
};

class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<TagPair> pairs);

  // Deleted on temporaries: `for (auto& p : load(...).pairs())` would dangle.
  const std::vector<TagPair>& pairs() const& noexcept { return pairs_; }
  const std::set<std::string>& sites() const& noexcept { return sites_; }
  void pairs() const&& = delete;
  void sites() const&& = delete;
  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }

  void add(TagPair pair);

  friend bool operator==(const Corpus&, const Corpus&) = default;

 private:
  std::vector<TagPair> pairs_;
  std::set<std::string> sites_;
};

inline constexpr const char* kCorpusCsvHeader = "child_tag,parent_tag,site_id";

/// Writes header plus one LF-terminated row per pair.
void write_corpus_csv(const Corpus& corpus, std::ostream& out);
void write_corpus_csv(const Corpus& corpus, const std::filesystem::path& path);

/// Accepts `child_tag,parent_tag` or `child_tag,parent_tag,site_id`. Without a
/// site column the site is the child's third segment, or the whole child tag
/// when it has fewer than three segments.
Corpus read_corpus_csv(std::istream& in);
Corpus load_corpus_csv(const std::filesystem::path& path);

/// Partitions by site. Throws SplitError unless `holdout_sites` is a non-empty
/// proper subset of the corpus sites.
std::pair<Corpus, Corpus> split_by_site(const Corpus& corpus, const std::set<std::string>& holdout_sites);

}  // namespace taglm
