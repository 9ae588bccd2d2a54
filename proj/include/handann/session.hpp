#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "handann/batch.hpp"
#include "handann/io.hpp"

namespace handann {

// Run configuration, readable from a key/value file (same syntax as shape
// files). Keys: shape, intrinsics, transform, seed, frames,
// frames_per_transition, sensor_rate_hz, sigma_pos_mm, sigma_rot_deg,
// tau_plane, tau_len, tau_res, tau_feasibility.
struct RunConfig {
  std::optional<std::filesystem::path> shape_path;  // built-in default shape when absent
  std::optional<std::filesystem::path> intrinsics_path;
  std::optional<std::filesystem::path> transform_path;
  std::uint64_t seed = 1;
  std::int64_t frames = 1000;
  std::int64_t frames_per_transition = 30;
  double sensor_rate_hz = 720.0;
  double sigma_pos_mm = 0.0;
  double sigma_rot_deg = 0.0;
  double tau_plane = 1e-6;
  double tau_len = 1e-6;
  double tau_res = 1e-6;
  double tau_feasibility = 2.0;

  // Throws InvalidInput listing every offending field.
  void validate() const;
  IkOptions ik_options() const { return {tau_feasibility, tau_res}; }
};

RunConfig parse_run_config(const io::KeyValues& kv, const std::string& source = "<config>");
RunConfig read_run_config(const std::filesystem::path& path);

struct SyntheticSession {
  std::vector<HandPose> poses;
  std::vector<SensorFrame> sensors;
  std::vector<io::AnnotationRow> truth;
};

// Walks the schemed schedule: segment k interpolates extremal pair k over
// frames_per_transition frames while the global pose moves between two random
// placements inside the segment's viewpoint region. Frame i is stamped
// round(i * 1e6 / sensor_rate_hz). Randomness: segment k draws from
// split_seed(seed, 2^32 + k); frame noise from split_seed(seed, i).
SyntheticSession generate_synthetic_session(const RunConfig& config, const HandShape& shape);

}  // namespace handann
