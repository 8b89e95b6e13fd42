#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "query2vec/common.hpp"
#include "query2vec/tokenizer.hpp"

namespace q2v {

// Dense token index space shared by both embedding models. Indices 0..2 are
// reserved for the special tokens; the rest are assigned by descending corpus
// frequency with lexicographic tie-break, so construction is deterministic.
class Vocabulary {
 public:
  static constexpr int kUnknownIndex = 0;
  static constexpr int kLiteralIndex = 1;
  static constexpr int kSequenceEndIndex = 2;
  static constexpr int kNumSpecials = 3;

  Vocabulary() {
    add(kUnknownToken, 0);
    add(kLiteralToken, 0);
    add(kSequenceEnd, 0);
  }

  int size() const { return static_cast<int>(tokens_.size()); }

  const std::string& token(int index) const { return tokens_.at(static_cast<std::size_t>(index)); }
  std::uint64_t count(int index) const { return counts_.at(static_cast<std::size_t>(index)); }

  // Known-token lookup; -1 when absent.
  int find(const std::string& token) const {
    auto it = index_.find(token);
    return it == index_.end() ? -1 : it->second;
  }

  // OOV tokens map to UNKNOWN.
  int index_or_unknown(const std::string& token) const {
    int i = find(token);
    return i < 0 ? kUnknownIndex : i;
  }

  std::vector<int> encode(const std::vector<std::string>& tokens) const {
    std::vector<int> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(index_or_unknown(t));
    return out;
  }

  std::uint64_t hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      h = fnv1a(tokens_[i], h);
      h = fnv1a(&counts_[i], sizeof(std::uint64_t), h);
    }
    return h;
  }

  void serialize(std::string& out) const {
    put_u64(out, tokens_.size());
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      put_str(out, tokens_[i]);
      put_u64(out, counts_[i]);
    }
  }

  static Vocabulary deserialize(ByteReader& in) {
    Vocabulary v;
    v.tokens_.clear();
    v.counts_.clear();
    v.index_.clear();
    std::uint64_t n = in.u64();
    for (std::uint64_t i = 0; i < n; ++i) {
      std::string t = in.str();
      std::uint64_t c = in.u64();
      v.add(t, c);
    }
    if (v.size() < kNumSpecials) throw std::runtime_error("vocabulary missing special tokens");
    return v;
  }

  friend Vocabulary build_vocabulary(const std::vector<TokenSeq>&, std::uint64_t);

 private:
  void add(const std::string& token, std::uint64_t count) {
    index_[token] = static_cast<int>(tokens_.size());
    tokens_.push_back(token);
    counts_.push_back(count);
  }

  std::vector<std::string> tokens_;      // index -> token
  std::vector<std::uint64_t> counts_;    // index -> corpus frequency
  std::unordered_map<std::string, int> index_;
};

// Counts token frequencies over the corpus and assigns indices. Tokens below
// min_count fold into UNKNOWN (their occurrences add to its count). The
// special tokens are exempt from the threshold.
inline Vocabulary build_vocabulary(const std::vector<TokenSeq>& corpus,
                                   std::uint64_t min_count = 1) {
  if (corpus.empty()) throw std::invalid_argument("build_vocabulary: empty corpus");
  std::map<std::string, std::uint64_t> freq;  // ordered: deterministic iteration
  for (const auto& seq : corpus)
    for (const auto& t : seq.tokens) ++freq[t];

  Vocabulary vocab;
  auto take_special = [&](const char* tok, int index) {
    auto it = freq.find(tok);
    if (it != freq.end()) {
      vocab.counts_[static_cast<std::size_t>(index)] = it->second;
      freq.erase(it);
    }
  };
  take_special(kUnknownToken, Vocabulary::kUnknownIndex);
  take_special(kLiteralToken, Vocabulary::kLiteralIndex);
  take_special(kSequenceEnd, Vocabulary::kSequenceEndIndex);

  std::vector<std::pair<std::string, std::uint64_t>> kept;
  kept.reserve(freq.size());
  for (const auto& [tok, c] : freq) {
    if (c >= min_count)
      kept.emplace_back(tok, c);
    else
      vocab.counts_[Vocabulary::kUnknownIndex] += c;
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  for (const auto& [tok, c] : kept) vocab.add(tok, c);
  return vocab;
}

}  // namespace q2v
