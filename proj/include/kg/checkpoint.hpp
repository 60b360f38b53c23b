#ifndef KG_CHECKPOINT_HPP
#define KG_CHECKPOINT_HPP

#include <string>

#include "kg/fft.hpp"
#include "kg/stepper.hpp"

namespace kg {

/// Binary checkpoint, little-endian, layout documented in README.md:
/// magic "KGCKPT01", version/reserved u32 pair, n (3 x u64),
/// length (3 x f64), dt (f64), step_index (u64), then uhat^{n-1} and uhat^n
/// as (re, im) f64 pairs in canonical layout. The physical copy of u^n is
/// reconstructed on load.
void save_checkpoint(const std::string& path, const SolverState& state);

/// Throws std::runtime_error on malformed files and std::invalid_argument if
/// the stored grid does not match the plan's.
SolverState load_checkpoint(const std::string& path, FftPlan& plan);

}  // namespace kg

#endif
