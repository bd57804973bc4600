#pragma once

#include <cstdint>

namespace qac {

// Instrumentation counters shared by the coding engines. node_touches counts
// every item examined during class merges; live_records_peak tracks the most
// item records simultaneously held by a merge run.
struct SolveStats {
  std::uint64_t node_touches = 0;
  std::uint64_t packages_formed = 0;
  std::uint64_t live_records_peak = 0;
  std::uint64_t merge_runs = 0;

  void observe_live(std::uint64_t live) {
    if (live > live_records_peak) live_records_peak = live;
  }
};

}  // namespace qac
