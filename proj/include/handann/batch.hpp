#pragma once

// Frame-parallel kernels. Each *_parallel function has a *_serial twin that
// runs the same per-frame code in a plain loop; the twins produce bit-identical
// output and the serial one is what the tests compare against.

#include <cstdint>
#include <span>
#include <vector>

#include "handann/ik.hpp"

namespace handann {

std::vector<AnnotationResult> annotate_frames_serial(std::span<const SensorFrame> frames, const HandShape& shape,
                                                     const IkOptions& opts = {});
std::vector<AnnotationResult> annotate_frames_parallel(std::span<const SensorFrame> frames, const HandShape& shape,
                                                       const IkOptions& opts = {});

struct SimulatedFrame {
  Skeleton truth;
  SensorFrame sensors;
};

// FK + sensor simulation per pose, optional noise. Frame i uses its own RNG
// seeded with split_seed(seed, i) and timestamp timestamps[i].
struct SimulationParams {
  std::uint64_t seed = 0;
  double sigma_pos_mm = 0.0;
  double sigma_rot_deg = 0.0;
};

std::vector<SimulatedFrame> simulate_frames_serial(std::span<const HandPose> poses,
                                                   std::span<const std::int64_t> timestamps, const HandShape& shape,
                                                   const SimulationParams& params);
std::vector<SimulatedFrame> simulate_frames_parallel(std::span<const HandPose> poses,
                                                     std::span<const std::int64_t> timestamps, const HandShape& shape,
                                                     const SimulationParams& params);

int max_threads();

}  // namespace handann
