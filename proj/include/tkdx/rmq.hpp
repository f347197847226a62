#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "tkdx/serialize.hpp"

namespace tkdx {

enum class RmqMode : std::uint8_t { kMax = 0, kMin = 1 };

/// Range maximum/minimum query structure answering with positions.
///
/// Block decomposition (32 elements per block) with a per-position bitmask of
/// the in-block monotone stack, plus a sparse table over per-block winners.
/// Values are only read at construction; a query compares at most four
/// candidate positions through a caller-supplied accessor, so the indexed
/// values need not be stored. Positions are 1-based; ties go to the smallest
/// position.
class RmqStructure {
 public:
  RmqStructure() = default;
  RmqStructure(std::span<const std::uint64_t> values, RmqMode mode);

  std::size_t size() const { return size_; }
  RmqMode mode() const { return mode_; }

  /// Position p in [lo, hi] with extremal `value_at(p)`. Throws on empty range.
  template <class ValueAt>
  std::size_t query(std::size_t lo, std::size_t hi, ValueAt&& value_at) const {
    if (lo > hi) throw std::invalid_argument("RMQ over empty range");
    if (lo < 1 || hi > size_) throw std::out_of_range("RMQ range out of bounds");
    std::size_t l = lo - 1, r = hi - 1;
    std::size_t bl = l / kBlock, br = r / kBlock;
    if (bl == br) return in_block(l, r) + 1;
    auto better = [&](std::size_t a, std::size_t b) {  // 0-based, a < b
      auto va = value_at(a + 1), vb = value_at(b + 1);
      bool strictly = mode_ == RmqMode::kMax ? vb > va : vb < va;
      return strictly ? b : a;
    };
    std::size_t best = in_block(l, bl * kBlock + kBlock - 1);
    if (br > bl + 1) best = better(best, sparse_query(bl + 1, br - 1, better));
    best = better(best, in_block(br * kBlock, r));
    return best + 1;
  }

  template <class T>
  std::size_t query(std::size_t lo, std::size_t hi, std::span<const T> values) const {
    return query(lo, hi, [&](std::size_t p) { return values[p - 1]; });
  }

  std::uint64_t size_in_bits() const;

  void save(Writer& w) const;
  static RmqStructure load(Reader& r);

 private:
  static constexpr std::size_t kBlock = 32;

  std::size_t in_block(std::size_t l, std::size_t r) const {
    std::uint32_t m = masks_[r] & (~std::uint32_t{0} << (l % kBlock));
    return (r / kBlock) * kBlock + static_cast<std::size_t>(std::countr_zero(m));
  }

  template <class Better>
  std::size_t sparse_query(std::size_t b0, std::size_t b1, Better&& better) const {
    std::size_t len = b1 - b0 + 1;
    std::size_t k = static_cast<std::size_t>(std::bit_width(len)) - 1;
    std::size_t a = table_[k * blocks_ + b0];
    std::size_t b = table_[k * blocks_ + b1 + 1 - (std::size_t{1} << k)];
    if (a == b) return a;
    return a < b ? better(a, b) : better(b, a);
  }

  std::vector<std::uint32_t> masks_;
  std::vector<std::uint32_t> table_;  // level-major, positions 0-based
  std::size_t size_ = 0;
  std::size_t blocks_ = 0;
  RmqMode mode_ = RmqMode::kMax;
};

}  // namespace tkdx
