#include "tkdx/rmq.hpp"

#include <algorithm>

namespace tkdx {

RmqStructure::RmqStructure(std::span<const std::uint64_t> values, RmqMode mode)
    : masks_(values.size(), 0), size_(values.size()), mode_(mode) {
  if (values.size() > 0xFFFFFFFFull) throw std::length_error("RMQ supports at most 2^32 positions");
  // `worse(a, b)`: b strictly beats a.
  auto beats = [&](std::size_t b, std::size_t a) {
    return mode_ == RmqMode::kMax ? values[b] > values[a] : values[b] < values[a];
  };
  blocks_ = (size_ + kBlock - 1) / kBlock;
  std::vector<std::uint32_t> winner(blocks_);
  for (std::size_t b = 0; b < blocks_; ++b) {
    std::size_t start = b * kBlock, end = std::min(size_, start + kBlock);
    std::uint32_t stack = 0;
    for (std::size_t j = start; j < end; ++j) {
      while (stack) {
        std::size_t top = start + 31 - static_cast<std::size_t>(std::countl_zero(stack));
        if (!beats(j, top)) break;
        stack &= ~(std::uint32_t{1} << (top - start));
      }
      stack |= std::uint32_t{1} << (j - start);
      masks_[j] = stack;
    }
    winner[b] = static_cast<std::uint32_t>(start + std::countr_zero(masks_[end - 1]));
  }
  std::size_t levels = blocks_ ? static_cast<std::size_t>(std::bit_width(blocks_)) : 0;
  table_.assign(levels * blocks_, 0);
  std::copy(winner.begin(), winner.end(), table_.begin());
  for (std::size_t k = 1; k < levels; ++k) {
    std::size_t half = std::size_t{1} << (k - 1);
    for (std::size_t b = 0; b + (std::size_t{1} << k) <= blocks_; ++b) {
      std::uint32_t a = table_[(k - 1) * blocks_ + b];
      std::uint32_t c = table_[(k - 1) * blocks_ + b + half];
      table_[k * blocks_ + b] = beats(c, a) ? c : a;
    }
  }
}

std::uint64_t RmqStructure::size_in_bits() const {
  return 32ull * masks_.size() + 32ull * table_.size();
}

void RmqStructure::save(Writer& w) const {
  auto at = w.begin_section(Tag::kRmq);
  w.put<std::uint8_t>(static_cast<std::uint8_t>(mode_));
  w.put<std::uint64_t>(size_);
  w.put_vector(masks_);
  w.put_vector(table_);
  w.end_section(at);
}

RmqStructure RmqStructure::load(Reader& r) {
  Reader s = r.section(Tag::kRmq);
  RmqStructure q;
  auto mode = s.get<std::uint8_t>();
  if (mode > 1) throw FormatError("bad RMQ mode");
  q.mode_ = static_cast<RmqMode>(mode);
  q.size_ = s.get<std::uint64_t>();
  q.masks_ = s.get_vector<std::uint32_t>();
  q.table_ = s.get_vector<std::uint32_t>();
  q.blocks_ = (q.size_ + kBlock - 1) / kBlock;
  std::size_t levels = q.blocks_ ? static_cast<std::size_t>(std::bit_width(q.blocks_)) : 0;
  if (q.masks_.size() != q.size_ || q.table_.size() != levels * q.blocks_) {
    throw FormatError("RMQ payload shape mismatch");
  }
  return q;
}

}  // namespace tkdx
