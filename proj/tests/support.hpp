#pragma once

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "taglm/corpus.hpp"
#include "taglm/generator.hpp"
#include "taglm/tag.hpp"

namespace taglm::testing {

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("taglm_test_" + std::to_string(rd()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

// The default generator corpus is reused by many tests; build it once.
inline const Corpus& default_corpus() {
  static const Corpus corpus = generate_corpus(GenConfig{});
  return corpus;
}

inline Corpus small_corpus(int facilities = 3, std::uint64_t seed = 11) {
  GenConfig cfg;
  cfg.n_facilities = facilities;
  cfg.seed = seed;
  return generate_corpus(cfg);
}


// Two pairs conflict when their reversed children agree on a prefix while
// their reversed parents already differ inside it: a model that emits parent
// character t after reading child characters 0..t cannot get both right.
inline bool position_conflict(const TagPair& a, const TagPair& b) {
  const std::string ca(a.child.rbegin(), a.child.rend()), cb(b.child.rbegin(), b.child.rend());
  const std::string pa(a.parent.rbegin(), a.parent.rend()), pb(b.parent.rbegin(), b.parent.rend());
  auto at = [](const std::string& s, std::size_t t) { return t < s.size() ? s[t] : '\0'; };
  for (std::size_t t = 0; t < kMaxTagLength; ++t) {
    if (at(ca, t) != at(cb, t)) return false;
    if (at(pa, t) != at(pb, t)) return true;
  }
  return false;
}

// The first `n` pairs of `corpus`, in order, skipping any pair that conflicts
// with one already taken.
inline Corpus memorizable_subset(const Corpus& corpus, std::size_t n) {
  Corpus out;
  for (const auto& p : corpus.pairs()) {
    if (out.size() == n) break;
    if (std::none_of(out.pairs().begin(), out.pairs().end(), [&](const TagPair& q) { return position_conflict(p, q); })) {
      out.add(p);
    }
  }
  return out;
}

}  // namespace taglm::testing
