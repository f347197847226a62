#include "tkdx/predecessor.hpp"

namespace tkdx {

SampledPredecessor::SampledPredecessor(std::span<const std::uint64_t> keys, std::size_t rate) {
  std::uint32_t offsets[2] = {0, static_cast<std::uint32_t>(keys.size())};
  *this = SampledPredecessor(keys, std::span<const std::uint32_t>(offsets), rate);
}

SampledPredecessor::SampledPredecessor(std::span<const std::uint64_t> keys,
                                       std::span<const std::uint32_t> run_offsets, std::size_t rate)
    : rate_(rate) {
  if (rate < 1) throw std::invalid_argument("predecessor sample rate must be positive");
  if (run_offsets.empty() || run_offsets.front() != 0 || run_offsets.back() != keys.size()) {
    throw std::invalid_argument("run offsets must span the key sequence");
  }
  elem_offset_.assign(run_offsets.begin(), run_offsets.end());
  sample_offset_.reserve(run_offsets.size());
  for (std::size_t r = 0; r + 1 < run_offsets.size(); ++r) {
    sample_offset_.push_back(static_cast<std::uint32_t>(samples_.size()));
    for (std::size_t i = run_offsets[r]; i < run_offsets[r + 1]; ++i) {
      if (i > run_offsets[r] && keys[i] < keys[i - 1]) throw std::invalid_argument("predecessor keys must be sorted");
      if ((i - run_offsets[r]) % rate == 0) samples_.push_back(keys[i]);
    }
  }
  sample_offset_.push_back(static_cast<std::uint32_t>(samples_.size()));
}

std::uint64_t SampledPredecessor::size_in_bits() const {
  return 64ull * samples_.size() + 32ull * (sample_offset_.size() + elem_offset_.size());
}

void SampledPredecessor::save(Writer& w) const {
  auto at = w.begin_section(Tag::kPredecessor);
  w.put<std::uint64_t>(rate_);
  w.put_vector(samples_);
  w.put_vector(sample_offset_);
  w.put_vector(elem_offset_);
  w.end_section(at);
}

SampledPredecessor SampledPredecessor::load(Reader& r) {
  Reader s = r.section(Tag::kPredecessor);
  SampledPredecessor p;
  p.rate_ = s.get<std::uint64_t>();
  p.samples_ = s.get_vector<std::uint64_t>();
  p.sample_offset_ = s.get_vector<std::uint32_t>();
  p.elem_offset_ = s.get_vector<std::uint32_t>();
  if (p.rate_ < 1 || p.sample_offset_.size() != p.elem_offset_.size() || p.elem_offset_.empty()) {
    throw FormatError("predecessor payload shape mismatch");
  }
  return p;
}

}  // namespace tkdx
