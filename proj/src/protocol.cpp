#include "handann/protocol.hpp"

#include <cmath>
#include <limits>

#include "handann/errors.hpp"

namespace handann {

namespace {

// Mean normalised flexion of each finger: 0 = fully extended, 1 = fully bent.
std::array<double, kNumFingers> bend_coordinates(const HandPose& p, const JointLimits& l) {
  auto norm = [](double v, const AngleRange& r) { return (v - r.lo) / (r.hi - r.lo); };
  std::array<double, kNumFingers> out{};
  for (std::size_t f = 0; f < out.size(); ++f) {
    const FingerPose& fp = p.fingers[f];
    out[f] = (norm(fp.mcp_flexion, l.mcp_flexion) + norm(fp.pip_flexion, l.pip_flexion) +
              norm(fp.dip_flexion, l.dip_flexion)) /
             3.0;
  }
  return out;
}

void tally(CoverageReport& rep, const HandPose& pose, const JointLimits& limits) {
  const Vec3 dir = view_direction(pose);
  if (dir.z() < 0) {
    ++rep.outside_hemisphere;
  } else {
    ++rep.regions[static_cast<std::size_t>(viewpoint_region(dir))];
  }
  ++rep.pairs[static_cast<std::size_t>(nearest_pair(pose, limits))];
}

}  // namespace

HandPose expand(ExtremalPose e, const JointLimits& limits) {
  HandPose p;
  for (int f = 0; f < kNumFingers; ++f) {
    FingerPose& fp = p.fingers[static_cast<std::size_t>(f)];
    const bool bent = e.bent(f);
    fp.mcp_flexion = bent ? limits.mcp_flexion.hi : limits.mcp_flexion.lo;
    fp.pip_flexion = bent ? limits.pip_flexion.hi : limits.pip_flexion.lo;
    fp.dip_flexion = bent ? limits.dip_flexion.hi : limits.dip_flexion.lo;
  }
  return p;
}

std::vector<HandPose> enumerate_extremal(const JointLimits& limits) {
  std::vector<HandPose> out;
  out.reserve(kNumExtremal);
  for (int c = 0; c < kNumExtremal; ++c) out.push_back(expand({static_cast<std::uint8_t>(c)}, limits));
  return out;
}

std::vector<std::pair<int, int>> enumerate_pairs() {
  std::vector<std::pair<int, int>> out;
  out.reserve(kNumPairs);
  for (int a = 0; a < kNumExtremal; ++a) {
    for (int b = a + 1; b < kNumExtremal; ++b) out.emplace_back(a, b);
  }
  return out;
}

std::vector<HandPose> interpolate_transition(const HandPose& a, const HandPose& b, int n, const JointLimits& limits) {
  if (n < 2) throw Error(ErrorKind::InvalidInput, "a transition needs at least 2 frames");
  if (!validate_pose(a, limits) || !validate_pose(b, limits)) {
    throw Error(ErrorKind::InvalidInput, "transition endpoints must be valid poses");
  }
  auto lerp = [](double x, double y, double s) { return x + s * (y - x); };
  std::vector<HandPose> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (i == 0) {
      out.push_back(a);
      continue;
    }
    if (i == n - 1) {
      out.push_back(b);
      continue;
    }
    const double s = static_cast<double>(i) / (n - 1);
    HandPose p;
    p.global.rotation = a.global.rotation.slerp(s, b.global.rotation).normalized();
    p.global.translation = a.global.translation + s * (b.global.translation - a.global.translation);
    for (std::size_t f = 0; f < p.fingers.size(); ++f) {
      const FingerPose& x = a.fingers[f];
      const FingerPose& y = b.fingers[f];
      p.fingers[f] = {lerp(x.mcp_twist, y.mcp_twist, s), lerp(x.mcp_flexion, y.mcp_flexion, s),
                      lerp(x.mcp_abduction, y.mcp_abduction, s), lerp(x.pip_flexion, y.pip_flexion, s),
                      lerp(x.dip_flexion, y.dip_flexion, s)};
    }
    out.push_back(p);
  }
  return out;
}

int viewpoint_region(const Vec3& d) {
  if (!d.allFinite() || std::abs(d.norm() - 1.0) > 1e-6) {
    throw Error(ErrorKind::OutOfDomain, "view direction must be a unit vector");
  }
  if (d.z() < 0.0) throw Error(ErrorKind::OutOfDomain, "view direction below the hemisphere");
  double az = std::atan2(d.y(), d.x());
  if (az < 0.0) az += 2.0 * kPi;
  const double el = std::asin(std::min(d.z(), 1.0));
  const int az_bin = std::min(kRegionBins - 1, static_cast<int>(std::floor(az / (2.0 * kPi / kRegionBins))));
  const int el_bin = std::min(kRegionBins - 1, static_cast<int>(std::floor(el / (0.5 * kPi / kRegionBins))));
  return kRegionBins * el_bin + az_bin;
}

RegionBounds region_bounds(int region) {
  if (region < 0 || region >= kNumRegions) throw Error(ErrorKind::OutOfDomain, "region id out of range");
  const int az = region % kRegionBins;
  const int el = region / kRegionBins;
  const double da = 2.0 * kPi / kRegionBins;
  const double de = 0.5 * kPi / kRegionBins;
  return {az * da, (az + 1) * da, el * de, (el + 1) * de};
}

Vec3 view_direction(const HandPose& pose) {
  return (pose.global.rotation.normalized().conjugate() * Vec3(0.0, 0.0, -1.0)).normalized();
}

Quat rotation_for_view(const Vec3& direction, double roll) {
  // R^T (0,0,-1) = direction  <=>  R direction = (0,0,-1).
  const Quat align = Quat::FromTwoVectors(direction.normalized(), Vec3(0.0, 0.0, -1.0));
  return canonical((axis_angle(Vec3::UnitZ(), roll) * align).normalized());
}

std::string_view segment_name(SegmentType t) {
  switch (t) {
    case SegmentType::Schemed: return "schemed";
    case SegmentType::Random: return "random";
    case SegmentType::Egocentric: return "egocentric";
  }
  return "?";
}

CaptureSchedule generate_schedule(std::int64_t frames_per_transition) {
  if (frames_per_transition < 0) throw Error(ErrorKind::InvalidInput, "frames per transition must be >= 0");
  CaptureSchedule s;
  const auto pairs = enumerate_pairs();
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    s.segments.push_back({SegmentType::Schemed, pairs[k].first, pairs[k].second,
                          static_cast<int>(k % kNumRegions), frames_per_transition});
  }
  const std::int64_t schemed_total = frames_per_transition * kNumPairs;
  const std::int64_t random_total = (schemed_total * 375 + 767) / 1534;
  const std::int64_t ego_total = (schemed_total * 290 + 767) / 1534;
  for (int r = 0; r < kNumRegions; ++r) {
    const std::int64_t share = random_total / kNumRegions + (r < random_total % kNumRegions ? 1 : 0);
    s.segments.push_back({SegmentType::Random, -1, -1, r, share});
  }
  for (int e = 0; e < kNumExtremal; ++e) {
    const std::int64_t share = ego_total / kNumExtremal + (e < ego_total % kNumExtremal ? 1 : 0);
    s.segments.push_back({SegmentType::Egocentric, e, -1, -1, share});
  }
  return s;
}

int nearest_pair(const HandPose& pose, const JointLimits& limits) {
  const auto m = bend_coordinates(pose, limits);
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  int k = 0;
  for (int a = 0; a < kNumExtremal; ++a) {
    for (int b = a + 1; b < kNumExtremal; ++b, ++k) {
      // Segment e_a -> e_b in the 5-cube: fixed fingers stay at their bit,
      // moving fingers share one parameter t.
      double num = 0.0;
      int moving = 0;
      for (int f = 0; f < kNumFingers; ++f) {
        const int ba = (a >> f) & 1, bb = (b >> f) & 1;
        if (ba != bb) {
          num += (bb - ba) * (m[static_cast<std::size_t>(f)] - ba);
          ++moving;
        }
      }
      const double t = std::clamp(num / moving, 0.0, 1.0);
      double dist = 0.0;
      for (int f = 0; f < kNumFingers; ++f) {
        const int ba = (a >> f) & 1, bb = (b >> f) & 1;
        const double target = ba + t * (bb - ba);
        const double e = m[static_cast<std::size_t>(f)] - target;
        dist += e * e;
      }
      if (dist < best_d - 1e-12) {
        best_d = dist;
        best = k;
      }
    }
  }
  return best;
}

CoverageReport coverage_report_serial(std::span<const HandPose> poses, const JointLimits& limits) {
  CoverageReport rep;
  rep.pairs.assign(kNumPairs, 0);
  for (const HandPose& p : poses) tally(rep, p, limits);
  return rep;
}

CoverageReport coverage_report(std::span<const HandPose> poses, const JointLimits& limits) {
  // Per-pose classification in parallel; counting afterwards in index order.
  const auto n = static_cast<std::int64_t>(poses.size());
  std::vector<int> region(poses.size()), pair(poses.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const Vec3 dir = view_direction(poses[k]);
    region[k] = dir.z() < 0 ? -1 : viewpoint_region(dir);
    pair[k] = nearest_pair(poses[k], limits);
  }
  CoverageReport rep;
  rep.pairs.assign(kNumPairs, 0);
  for (std::size_t k = 0; k < poses.size(); ++k) {
    if (region[k] < 0) {
      ++rep.outside_hemisphere;
    } else {
      ++rep.regions[static_cast<std::size_t>(region[k])];
    }
    ++rep.pairs[static_cast<std::size_t>(pair[k])];
  }
  return rep;
}

}  // namespace handann
