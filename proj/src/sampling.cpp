#include "handann/sampling.hpp"

namespace handann {

std::uint64_t split_seed(std::uint64_t session_seed, std::uint64_t stream) {
  std::uint64_t z = session_seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Quat random_rotation(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Vector4d v;
  do {
    v = Eigen::Vector4d(n(rng), n(rng), n(rng), n(rng));
  } while (v.norm() < 1e-6);
  v.normalize();
  return canonical(Quat(v(0), v(1), v(2), v(3)));
}

HandPose random_pose(Rng& rng, const JointLimits& limits, double translation_range) {
  auto pick = [&](const AngleRange& r) { return std::uniform_real_distribution<double>(r.lo, r.hi)(rng); };
  HandPose pose;
  pose.global.rotation = random_rotation(rng);
  std::uniform_real_distribution<double> t(-translation_range, translation_range);
  pose.global.translation = Vec3(t(rng), t(rng), t(rng));
  for (FingerPose& fp : pose.fingers) {
    fp.mcp_twist = pick(limits.mcp_twist);
    fp.mcp_flexion = pick(limits.mcp_flexion);
    fp.mcp_abduction = pick(limits.mcp_abduction);
    fp.pip_flexion = pick(limits.pip_flexion);
    fp.dip_flexion = pick(limits.dip_flexion);
  }
  return pose;
}

HandShape random_shape(Rng& rng) {
  HandShape s = HandShape::default_shape();
  const double scale = std::uniform_real_distribution<double>(0.85, 1.15)(rng);
  std::uniform_real_distribution<double> jitter(0.9, 1.1);
  std::uniform_real_distribution<double> palm_jitter(-3.0, 3.0);
  for (std::size_t i = 0; i < s.palm_points.size(); ++i) {
    if (i == 0) continue;  // W stays at the origin
    s.palm_points[i] = scale * s.palm_points[i] + Vec3(palm_jitter(rng), palm_jitter(rng), palm_jitter(rng));
  }
  for (FingerShape& f : s.fingers) {
    f.proximal *= scale * jitter(rng);
    f.middle *= scale * jitter(rng);
    f.distal *= scale * jitter(rng);
    f.half_thickness = std::uniform_real_distribution<double>(5.0, 9.0)(rng);
    f.nail_fraction = std::uniform_real_distribution<double>(0.3, 0.7)(rng);
  }
  std::normal_distribution<double> small(0.0, deg2rad(5.0));
  s.s6_offset.rotation = canonical(quat_exp(Vec3(small(rng), small(rng), small(rng))));
  s.s6_offset.translation = scale * s.s6_offset.translation + Vec3(palm_jitter(rng), palm_jitter(rng), 0.0);
  return s;
}

}  // namespace handann
