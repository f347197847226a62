#include "tkdx/monotone.hpp"

#include <stdexcept>
#include <string>

namespace tkdx {

MonotoneSequence::MonotoneSequence(std::span<const std::uint32_t> values) {
  std::uint32_t offsets[2] = {0, static_cast<std::uint32_t>(values.size())};
  *this = MonotoneSequence(values, std::span<const std::uint32_t>(offsets));
}

MonotoneSequence::MonotoneSequence(std::span<const std::uint32_t> values,
                                   std::span<const std::uint32_t> run_offsets) {
  if (run_offsets.empty() || run_offsets.front() != 0 || run_offsets.back() != values.size()) {
    throw std::invalid_argument("run offsets must span the value sequence");
  }
  elem_offset_.assign(run_offsets.begin(), run_offsets.end());
  one_offset_.assign(run_offsets.size(), 0);
  std::uint32_t ones = 0;
  for (std::size_t r = 0; r + 1 < run_offsets.size(); ++r) {
    if (run_offsets[r + 1] < run_offsets[r]) throw std::invalid_argument("run offsets must be non-decreasing");
    std::uint32_t prev = 0;
    for (std::size_t i = run_offsets[r]; i < run_offsets[r + 1]; ++i) {
      std::uint32_t v = values[i];
      if (v < 1) throw std::invalid_argument("monotone sequence values must be positive");
      if (v < prev) {
        throw std::invalid_argument("monotone sequence decreases at index " + std::to_string(i - run_offsets[r] + 1));
      }
      for (std::uint32_t u = prev; u < v; ++u) bits_.push_back(true);
      bits_.push_back(false);
      ones += v - prev;
      prev = v;
    }
    one_offset_[r + 1] = ones;
  }
  bits_.build_index();
}

std::uint32_t MonotoneSequence::access(std::size_t run, std::size_t i) const {
  if (run + 1 >= elem_offset_.size()) throw std::out_of_range("monotone run out of range");
  if (i < 1 || i > run_size(run)) throw std::out_of_range("monotone index out of range");
  std::size_t p = bits_.select0(elem_offset_[run] + i);
  return static_cast<std::uint32_t>(bits_.rank1(p) - one_offset_[run]);
}

std::uint64_t MonotoneSequence::size_in_bits() const {
  return bits_.size_in_bits() + 32ull * (elem_offset_.size() + one_offset_.size());
}

void MonotoneSequence::save(Writer& w) const {
  auto at = w.begin_section(Tag::kMonotone);
  bits_.save(w);
  w.put_vector(elem_offset_);
  w.put_vector(one_offset_);
  w.end_section(at);
}

MonotoneSequence MonotoneSequence::load(Reader& r) {
  Reader s = r.section(Tag::kMonotone);
  MonotoneSequence m;
  m.bits_ = BitVector::load(s);
  m.elem_offset_ = s.get_vector<std::uint32_t>();
  m.one_offset_ = s.get_vector<std::uint32_t>();
  if (m.elem_offset_.size() != m.one_offset_.size() || m.elem_offset_.empty() ||
      m.bits_.size() != static_cast<std::size_t>(m.elem_offset_.back()) + m.one_offset_.back()) {
    throw FormatError("monotone payload shape mismatch");
  }
  return m;
}

}  // namespace tkdx
