#pragma once

#include <cstdint>

namespace tkdx {

/// Per-query instrumentation. Owned by the caller, never shared across queries.
struct QueryCounters {
  std::uint64_t boundary_searches = 0;  // predecessor searches locating origin subranges
  std::uint64_t rmq_calls = 0;
  std::uint64_t heap_nodes = 0;      // conceptual-heap nodes materialized by the range top-k kernel
  std::uint64_t decode_calls = 0;    // origin / term-frequency decodes
  std::uint64_t wavelet_nodes = 0;   // largest canonical wavelet decomposition seen
  std::uint64_t fringe_leaves = 0;
  std::uint64_t listing_reports = 0;  // documents reported by chain-array listing

  QueryCounters& operator+=(const QueryCounters& o) {
    boundary_searches += o.boundary_searches;
    rmq_calls += o.rmq_calls;
    heap_nodes += o.heap_nodes;
    decode_calls += o.decode_calls;
    wavelet_nodes = wavelet_nodes > o.wavelet_nodes ? wavelet_nodes : o.wavelet_nodes;
    fringe_leaves += o.fringe_leaves;
    listing_reports += o.listing_reports;
    return *this;
  }
};

}  // namespace tkdx
