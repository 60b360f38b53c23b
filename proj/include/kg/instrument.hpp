#ifndef KG_INSTRUMENT_HPP
#define KG_INSTRUMENT_HPP

#include <atomic>
#include <cstdint>

namespace kg::instrument {

/// Process-wide counters used to assert that timed benchmark regions contain
/// no diagnostic reductions and no disk writes.
std::atomic<std::uint64_t>& integrate_calls();
std::atomic<std::uint64_t>& file_writes();

struct Snapshot {
  std::uint64_t integrate_calls = 0;
  std::uint64_t file_writes = 0;
};

Snapshot snapshot();

}  // namespace kg::instrument

#endif
