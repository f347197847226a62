#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tkdx/bits.hpp"

namespace tkdx {

/// Unary encoding of non-decreasing positive integer sequences.
///
/// Each element contributes its increment over the previous element as 1-bits
/// followed by a single 0, so S = 1333445 becomes B = 101100010010 and
/// S[i] = rank1(select0(i)). Several independent sequences ("runs") may share
/// one bit vector; run r starts where run r-1 ends.
class MonotoneSequence {
 public:
  MonotoneSequence() = default;

  /// Single run. Throws std::invalid_argument if `values` decreases or starts below 1.
  explicit MonotoneSequence(std::span<const std::uint32_t> values);

  /// `values` split into runs by `run_offsets` (size runs+1, offsets[0] == 0).
  MonotoneSequence(std::span<const std::uint32_t> values, std::span<const std::uint32_t> run_offsets);

  std::size_t runs() const { return elem_offset_.empty() ? 0 : elem_offset_.size() - 1; }
  std::size_t size() const { return elem_offset_.empty() ? 0 : elem_offset_.back(); }
  std::size_t run_size(std::size_t run) const { return elem_offset_[run + 1] - elem_offset_[run]; }
  /// Largest value of a run (0 for an empty run).
  std::uint32_t run_max(std::size_t run) const { return one_offset_[run + 1] - one_offset_[run]; }

  /// i-th element (1-based) of a single-run sequence.
  std::uint32_t access(std::size_t i) const { return access(0, i); }
  /// i-th element (1-based) of run `run`.
  std::uint32_t access(std::size_t run, std::size_t i) const;

  const BitVector& bits() const { return bits_; }
  std::uint64_t size_in_bits() const;

  void save(Writer& w) const;
  static MonotoneSequence load(Reader& r);

 private:
  BitVector bits_;
  std::vector<std::uint32_t> elem_offset_;
  std::vector<std::uint32_t> one_offset_;
};

}  // namespace tkdx
