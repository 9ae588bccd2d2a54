#include "handann/batch.hpp"

#include <omp.h>

#include "handann/errors.hpp"

namespace handann {

namespace {

SimulatedFrame simulate_one(const HandPose& pose, std::int64_t ts, std::size_t i, const HandShape& shape,
                            const SimulationParams& params) {
  SimulatedFrame out;
  out.truth = forward_kinematics(shape, pose);
  out.sensors = simulate_sensors(shape, out.truth, ts);
  if (params.sigma_pos_mm > 0.0 || params.sigma_rot_deg > 0.0) {
    Rng rng(split_seed(params.seed, i));
    out.sensors = add_sensor_noise(out.sensors, params.sigma_pos_mm, params.sigma_rot_deg, rng);
  }
  return out;
}

void check_sizes(std::size_t poses, std::size_t stamps) {
  if (poses != stamps) throw Error(ErrorKind::InvalidInput, "poses and timestamps differ in length");
}

}  // namespace

int max_threads() { return omp_get_max_threads(); }

std::vector<AnnotationResult> annotate_frames_serial(std::span<const SensorFrame> frames, const HandShape& shape,
                                                     const IkOptions& opts) {
  std::vector<AnnotationResult> out(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) out[i] = annotate_frame(frames[i], shape, opts);
  return out;
}

std::vector<AnnotationResult> annotate_frames_parallel(std::span<const SensorFrame> frames, const HandShape& shape,
                                                       const IkOptions& opts) {
  // Validate up front: exceptions must not escape an OpenMP region.
  for (const SensorFrame& f : frames) check_frame(f);
  std::vector<AnnotationResult> out(frames.size());
  const auto n = static_cast<std::int64_t>(frames.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = annotate_frame(frames[static_cast<std::size_t>(i)], shape, opts);
  }
  return out;
}

std::vector<SimulatedFrame> simulate_frames_serial(std::span<const HandPose> poses,
                                                   std::span<const std::int64_t> timestamps, const HandShape& shape,
                                                   const SimulationParams& params) {
  check_sizes(poses.size(), timestamps.size());
  std::vector<SimulatedFrame> out(poses.size());
  for (std::size_t i = 0; i < poses.size(); ++i) out[i] = simulate_one(poses[i], timestamps[i], i, shape, params);
  return out;
}

std::vector<SimulatedFrame> simulate_frames_parallel(std::span<const HandPose> poses,
                                                     std::span<const std::int64_t> timestamps, const HandShape& shape,
                                                     const SimulationParams& params) {
  check_sizes(poses.size(), timestamps.size());
  if (auto r = validate_shape(shape); !r) throw Error(ErrorKind::InvalidInput, "invalid shape: " + r.violations.front());
  for (const HandPose& p : poses) {
    if (auto r = validate_pose(p); !r) throw Error(ErrorKind::InvalidInput, "invalid pose: " + r.violations.front());
  }
  std::vector<SimulatedFrame> out(poses.size());
  const auto n = static_cast<std::int64_t>(poses.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = simulate_one(poses[k], timestamps[k], k, shape, params);
  }
  return out;
}

}  // namespace handann
