#include "handann/session.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "handann/protocol.hpp"

namespace handann {

namespace {

double number(const io::KeyValues& kv, const std::string& key, double fallback, const std::string& source) {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  double v = 0;
  const auto& s = it->second;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::Parse, fmt::format("{}: key '{}' is not a number", source, key));
  }
  return v;
}

std::int64_t integer(const io::KeyValues& kv, const std::string& key, std::int64_t fallback, const std::string& source) {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  std::int64_t v = 0;
  const auto& s = it->second;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::Parse, fmt::format("{}: key '{}' is not an integer", source, key));
  }
  return v;
}

// Random global placement whose view direction falls in `region`.
RigidTransform placement_in_region(int region, Rng& rng) {
  const RegionBounds b = region_bounds(region);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double az = b.azimuth_lo + (b.azimuth_hi - b.azimuth_lo) * u(rng);
  // Uniform on the sphere patch: sin(elevation) uniform.
  const double s_lo = std::sin(b.elevation_lo), s_hi = std::sin(b.elevation_hi);
  const double el = std::asin(s_lo + (s_hi - s_lo) * u(rng));
  const Vec3 dir(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el));
  RigidTransform g;
  g.rotation = rotation_for_view(dir, 2.0 * kPi * u(rng));
  std::uniform_real_distribution<double> lateral(-120.0, 120.0);
  std::uniform_real_distribution<double> depth(300.0, 600.0);
  g.translation = Vec3(lateral(rng), lateral(rng), depth(rng));
  return g;
}

}  // namespace

void RunConfig::validate() const {
  std::vector<std::string> bad;
  if (frames < 0) bad.push_back("frames must be >= 0");
  if (frames_per_transition < 2) bad.push_back("frames_per_transition must be >= 2");
  if (!(sensor_rate_hz > 0)) bad.push_back("sensor_rate_hz must be > 0");
  if (!(sigma_pos_mm >= 0)) bad.push_back("sigma_pos_mm must be >= 0");
  if (!(sigma_rot_deg >= 0)) bad.push_back("sigma_rot_deg must be >= 0");
  if (!(tau_plane > 0)) bad.push_back("tau_plane must be > 0");
  if (!(tau_len > 0)) bad.push_back("tau_len must be > 0");
  if (!(tau_res > 0)) bad.push_back("tau_res must be > 0");
  if (!(tau_feasibility > 0)) bad.push_back("tau_feasibility must be > 0");
  if (bad.empty()) return;
  std::string msg = "invalid config:";
  for (const auto& b : bad) msg += " " + b + ";";
  msg.pop_back();
  throw Error(ErrorKind::InvalidInput, msg);
}

RunConfig parse_run_config(const io::KeyValues& kv, const std::string& source) {
  static const std::vector<std::string> known = {
      "shape",     "intrinsics",    "transform", "seed",    "frames",  "frames_per_transition", "sensor_rate_hz",
      "sigma_pos_mm", "sigma_rot_deg", "tau_plane", "tau_len", "tau_res", "tau_feasibility"};
  for (const auto& [key, value] : kv) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw Error(ErrorKind::Parse, fmt::format("{}: unknown key '{}'", source, key));
    }
  }
  RunConfig c;
  if (auto it = kv.find("shape"); it != kv.end()) c.shape_path = it->second;
  if (auto it = kv.find("intrinsics"); it != kv.end()) c.intrinsics_path = it->second;
  if (auto it = kv.find("transform"); it != kv.end()) c.transform_path = it->second;
  c.seed = static_cast<std::uint64_t>(integer(kv, "seed", static_cast<std::int64_t>(c.seed), source));
  c.frames = integer(kv, "frames", c.frames, source);
  c.frames_per_transition = integer(kv, "frames_per_transition", c.frames_per_transition, source);
  c.sensor_rate_hz = number(kv, "sensor_rate_hz", c.sensor_rate_hz, source);
  c.sigma_pos_mm = number(kv, "sigma_pos_mm", c.sigma_pos_mm, source);
  c.sigma_rot_deg = number(kv, "sigma_rot_deg", c.sigma_rot_deg, source);
  c.tau_plane = number(kv, "tau_plane", c.tau_plane, source);
  c.tau_len = number(kv, "tau_len", c.tau_len, source);
  c.tau_res = number(kv, "tau_res", c.tau_res, source);
  c.tau_feasibility = number(kv, "tau_feasibility", c.tau_feasibility, source);
  return c;
}

RunConfig read_run_config(const std::filesystem::path& path) {
  RunConfig c = parse_run_config(io::read_key_values(path), path.string());
  // Relative paths inside a config resolve against the config's directory.
  const auto base = path.parent_path();
  for (auto* p : {&c.shape_path, &c.intrinsics_path, &c.transform_path}) {
    if (*p && p->value().is_relative()) *p = base / p->value();
  }
  return c;
}

SyntheticSession generate_synthetic_session(const RunConfig& config, const HandShape& shape) {
  config.validate();
  if (auto r = validate_shape(shape); !r) throw Error(ErrorKind::InvalidInput, "invalid shape: " + r.violations.front());

  SyntheticSession s;
  const auto schedule = generate_schedule(config.frames_per_transition);
  const auto extremal = enumerate_extremal();
  std::vector<const Segment*> schemed;
  for (const Segment& seg : schedule.segments) {
    if (seg.type == SegmentType::Schemed) schemed.push_back(&seg);
  }

  s.poses.reserve(static_cast<std::size_t>(config.frames));
  for (std::uint64_t k = 0; static_cast<std::int64_t>(s.poses.size()) < config.frames; ++k) {
    const Segment& seg = *schemed[k % schemed.size()];
    Rng rng(split_seed(config.seed, (1ULL << 32) + k));
    HandPose a = extremal[static_cast<std::size_t>(seg.pose_a)];
    HandPose b = extremal[static_cast<std::size_t>(seg.pose_b)];
    a.global = placement_in_region(seg.region, rng);
    b.global = placement_in_region(seg.region, rng);
    for (const HandPose& p : interpolate_transition(a, b, static_cast<int>(seg.frames))) {
      if (static_cast<std::int64_t>(s.poses.size()) == config.frames) break;
      s.poses.push_back(p);
    }
  }

  std::vector<std::int64_t> stamps(s.poses.size());
  for (std::size_t i = 0; i < stamps.size(); ++i) {
    stamps[i] = std::llround(static_cast<double>(i) * 1e6 / config.sensor_rate_hz);
  }
  const auto sim = simulate_frames_parallel(s.poses, stamps, shape,
                                            {config.seed, config.sigma_pos_mm, config.sigma_rot_deg});
  s.sensors.reserve(sim.size());
  s.truth.reserve(sim.size());
  for (std::size_t i = 0; i < sim.size(); ++i) {
    s.sensors.push_back(sim[i].sensors);
    s.truth.push_back({stamps[i], sim[i].truth, "exact"});
  }
  return s;
}

}  // namespace handann
