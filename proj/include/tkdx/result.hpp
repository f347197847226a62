#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "tkdx/corpus.hpp"

namespace tkdx {

struct TopkRow {
  DocId doc = 0;
  std::size_t tf = 0;

  friend bool operator==(const TopkRow&, const TopkRow&) = default;
};

/// Rows ordered by tf descending, then doc ascending.
using TopkResult = std::vector<TopkRow>;

inline void sort_rows(TopkResult& rows) {
  std::sort(rows.begin(), rows.end(), [](const TopkRow& a, const TopkRow& b) {
    return a.tf != b.tf ? a.tf > b.tf : a.doc < b.doc;
  });
}

}  // namespace tkdx
