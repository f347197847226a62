#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "tkdx/serialize.hpp"

namespace tkdx {

/// Predecessor search over sorted keys that keeps only every s-th key.
///
/// The full key sequence is not stored; callers pass an accessor
/// `key_at(global_index)` (0-based) used to resolve the last <= s candidates
/// after the sampled keys narrowed the search. Keys may be split into runs, each
/// sorted on its own (run r covers global indices [offsets[r], offsets[r+1])).
class SampledPredecessor {
 public:
  static constexpr std::size_t kDefaultRate = 64;

  SampledPredecessor() = default;

  /// One sorted run.
  SampledPredecessor(std::span<const std::uint64_t> keys, std::size_t rate);

  /// Sorted runs delimited by `run_offsets`.
  SampledPredecessor(std::span<const std::uint64_t> keys, std::span<const std::uint32_t> run_offsets,
                     std::size_t rate);

  std::size_t rate() const { return rate_; }
  std::size_t runs() const { return elem_offset_.empty() ? 0 : elem_offset_.size() - 1; }
  std::size_t run_begin(std::size_t run) const { return elem_offset_[run]; }
  std::size_t run_size(std::size_t run) const { return elem_offset_[run + 1] - elem_offset_[run]; }

  /// Number of keys <= x in `run`; equivalently the largest local 1-based
  /// index whose key is <= x, or 0 when every key exceeds x.
  template <class KeyAt>
  std::size_t count_le(std::size_t run, std::uint64_t x, KeyAt&& key_at) const {
    std::size_t s0 = sample_offset_[run], s1 = sample_offset_[run + 1];
    auto it = std::upper_bound(samples_.begin() + static_cast<std::ptrdiff_t>(s0),
                               samples_.begin() + static_cast<std::ptrdiff_t>(s1), x);
    if (it == samples_.begin() + static_cast<std::ptrdiff_t>(s0)) return 0;
    std::size_t sample = static_cast<std::size_t>(it - samples_.begin()) - s0 - 1;
    // local index (0-based) `base` has key <= x; answer lies in [base, base + rate)
    std::size_t lo = sample * rate_;
    std::size_t hi = std::min(run_size(run), lo + rate_);
    std::size_t first = elem_offset_[run];
    // first local index in (lo, hi) whose key exceeds x
    std::size_t a = lo + 1, b = hi;
    while (a < b) {
      std::size_t mid = a + (b - a) / 2;
      if (key_at(first + mid) <= x) {
        a = mid + 1;
      } else {
        b = mid;
      }
    }
    return a;
  }

  /// Largest 1-based index with key <= x over a single-run structure.
  template <class KeyAt>
    requires std::invocable<KeyAt, std::size_t>
  std::optional<std::size_t> predecessor(std::uint64_t x, KeyAt&& key_at) const {
    std::size_t c = count_le(0, x, key_at);
    if (c == 0) return std::nullopt;
    return c;
  }
  std::optional<std::size_t> predecessor(std::uint64_t x, std::span<const std::uint64_t> keys) const {
    return predecessor(x, [&](std::size_t i) { return keys[i]; });
  }

  std::uint64_t size_in_bits() const;

  void save(Writer& w) const;
  static SampledPredecessor load(Reader& r);

 private:
  std::vector<std::uint64_t> samples_;
  std::vector<std::uint32_t> sample_offset_;
  std::vector<std::uint32_t> elem_offset_;
  std::size_t rate_ = kDefaultRate;
};

}  // namespace tkdx
