#include "kg/instrument.hpp"

namespace kg::instrument {

std::atomic<std::uint64_t>& integrate_calls() {
  static std::atomic<std::uint64_t> counter{0};
  return counter;
}

std::atomic<std::uint64_t>& file_writes() {
  static std::atomic<std::uint64_t> counter{0};
  return counter;
}

Snapshot snapshot() {
  return Snapshot{integrate_calls().load(), file_writes().load()};
}

}  // namespace kg::instrument
