#pragma once

#include <cstdint>
#include <random>

#include "handann/hand_model.hpp"

namespace handann {

using Rng = std::mt19937_64;

// Per-frame seed derived from a session seed: splitmix64(seed + golden * (i + 1)).
std::uint64_t split_seed(std::uint64_t session_seed, std::uint64_t stream);

Quat random_rotation(Rng& rng);

// Uniform within the limit box; global rotation uniform on SO(3), translation
// uniform in a cube of half-width `translation_range` mm.
HandPose random_pose(Rng& rng, const JointLimits& limits = JointLimits::defaults(),
                     double translation_range = 300.0);

// Default shape scaled by 0.85..1.15 with per-bone jitter of +-10%.
HandShape random_shape(Rng& rng);

}  // namespace handann
