#pragma once

// Brute-force reference implementations. Nothing here touches library internals
// beyond the public Corpus type.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tkdx/corpus.hpp"

namespace oracle {

using tkdx::Corpus;
using tkdx::DocId;

inline std::string concat(const Corpus& c) {
  std::string t;
  for (const auto& d : c.documents) {
    t += d;
    t += c.separator;
  }
  return t;
}

/// Separator sorts before every other byte.
inline int order(char c, char sep) { return c == sep ? -1 : static_cast<unsigned char>(c); }

inline bool suffix_less(const std::string& t, std::size_t a, std::size_t b, char sep) {
  while (a < t.size() && b < t.size()) {
    int x = order(t[a], sep), y = order(t[b], sep);
    if (x != y) return x < y;
    ++a;
    ++b;
  }
  return a == t.size() && b != t.size();
}

/// 1-based suffix array, index 0 unused.
inline std::vector<std::uint32_t> naive_sa(const std::string& t, char sep) {
  std::vector<std::uint32_t> idx(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) idx[i] = static_cast<std::uint32_t>(i);
  std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) { return suffix_less(t, a, b, sep); });
  std::vector<std::uint32_t> sa(t.size() + 1, 0);
  for (std::size_t i = 0; i < t.size(); ++i) sa[i + 1] = idx[i] + 1;
  return sa;
}

inline DocId naive_doc_of(const std::string& t, std::size_t a, char sep) {
  DocId d = 1;
  for (std::size_t i = 0; i + 1 < a; ++i) d += t[i] == sep;
  return d;
}

/// D_A[1..N], index 0 unused.
inline std::vector<DocId> naive_doc_array(const Corpus& c) {
  std::string t = concat(c);
  auto sa = naive_sa(t, c.separator);
  std::vector<DocId> owner(t.size() + 1, 0);
  DocId d = 1;
  for (std::size_t i = 1; i <= t.size(); ++i) {
    owner[i] = d;
    if (t[i - 1] == c.separator) ++d;
  }
  std::vector<DocId> da(t.size() + 1, 0);
  for (std::size_t i = 1; i <= t.size(); ++i) da[i] = owner[sa[i]];
  return da;
}

inline std::size_t count_occurrences(const std::string& doc, const std::string& p) {
  if (p.empty() || p.size() > doc.size()) return 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i + p.size() <= doc.size(); ++i) n += doc.compare(i, p.size(), p) == 0;
  return n;
}

using Ranking = std::vector<std::pair<DocId, std::size_t>>;

inline void sort_ranking(Ranking& r) {
  std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
}

/// Top-k by naive per-document string counting; ties by smaller doc id.
inline Ranking topk(const Corpus& c, const std::string& p, std::size_t k) {
  Ranking r;
  for (std::size_t d = 0; d < c.documents.size(); ++d) {
    std::size_t tf = count_occurrences(c.documents[d], p);
    if (tf > 0) r.emplace_back(static_cast<DocId>(d + 1), tf);
  }
  sort_ranking(r);
  if (r.size() > k) r.resize(k);
  return r;
}

/// Distinct substrings of all documents (separator-free by construction).
inline std::vector<std::string> all_substrings(const Corpus& c) {
  std::set<std::string> s;
  for (const auto& d : c.documents) {
    for (std::size_t i = 0; i < d.size(); ++i) {
      for (std::size_t l = 1; i + l <= d.size(); ++l) s.insert(d.substr(i, l));
    }
  }
  return {s.begin(), s.end()};
}

/// Random corpus of `docs` documents with total content length about `total`, alphabet 'a'.. of size sigma.
/// Lengths are skewed so some documents are much longer than others; empty documents may occur.
inline Corpus random_corpus(std::mt19937_64& rng, std::size_t docs, std::size_t total, unsigned sigma,
                            bool allow_empty = true) {
  Corpus c;
  std::vector<double> w(docs);
  std::exponential_distribution<double> ex(1.0);
  double sum = 0;
  for (auto& x : w) sum += (x = ex(rng));
  std::uniform_int_distribution<unsigned> ch(0, sigma - 1);
  for (std::size_t d = 0; d < docs; ++d) {
    auto len = static_cast<std::size_t>(w[d] / sum * static_cast<double>(total));
    if (!allow_empty && len == 0) len = 1;
    std::string s(len, 'a');
    // repetitive runs make deep trees and large term frequencies
    for (std::size_t i = 0; i < len; ++i) {
      if (i >= 4 && rng() % 3 == 0) {
        s[i] = s[i - 1 - rng() % 4];
      } else {
        s[i] = static_cast<char>('a' + ch(rng));
      }
    }
    c.documents.push_back(std::move(s));
  }
  return c;
}

/// Chain array of D_A (1-based), 0 when no previous occurrence.
inline std::vector<std::size_t> chain_array(const std::vector<DocId>& da) {
  std::map<DocId, std::size_t> last;
  std::vector<std::size_t> c(da.size(), 0);
  for (std::size_t i = 1; i < da.size(); ++i) {
    auto it = last.find(da[i]);
    c[i] = it == last.end() ? 0 : it->second;
    last[da[i]] = i;
  }
  return c;
}

}  // namespace oracle
