#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "handann/hand_model.hpp"

namespace handann {

inline constexpr int kNumExtremal = 32;
inline constexpr int kNumPairs = 496;
inline constexpr int kNumRegions = 16;
inline constexpr int kRegionBins = 4;

// Bit f of the code set = finger f (0 = thumb) maximally bent.
struct ExtremalPose {
  std::uint8_t code = 0;
  bool bent(int finger) const { return (code >> finger) & 1u; }
};

// Bent = upper limits of the three flexions, extended = lower limits; twist
// and abduction zero. Global transform identity.
HandPose expand(ExtremalPose e, const JointLimits& limits = JointLimits::defaults());

std::vector<HandPose> enumerate_extremal(const JointLimits& limits = JointLimits::defaults());

// All unordered (a, b) with a < b, in lexicographic order.
std::vector<std::pair<int, int>> enumerate_pairs();

// Angles linear, global rotation by slerp, translation linear; n >= 2 poses
// with both endpoints included.
std::vector<HandPose> interpolate_transition(const HandPose& a, const HandPose& b, int n,
                                             const JointLimits& limits = JointLimits::defaults());

// Viewing hemisphere z >= 0, binned 4 x 4 on azimuth in [0, 2pi) and elevation
// in [0, pi/2] with half-open bins [lo, hi); elevation pi/2 (zenith) joins the
// top band. id = 4 * elevation_bin + azimuth_bin.
int viewpoint_region(const Vec3& direction);

struct RegionBounds {
  double azimuth_lo, azimuth_hi, elevation_lo, elevation_hi;
};
RegionBounds region_bounds(int region);

// Direction from the hand toward a camera on the -z side of its frame,
// expressed in palm-local coordinates: R^T (0, 0, -1).
Vec3 view_direction(const HandPose& pose);

// Global rotation whose view_direction is `direction` (unit, any roll).
Quat rotation_for_view(const Vec3& direction, double roll = 0.0);

enum class SegmentType { Schemed, Random, Egocentric };
std::string_view segment_name(SegmentType t);

struct Segment {
  SegmentType type = SegmentType::Schemed;
  int pose_a = -1;  // extremal ids; -1 when not applicable
  int pose_b = -1;
  int region = -1;  // -1 for egocentric
  std::int64_t frames = 0;
};

struct CaptureSchedule {
  std::vector<Segment> segments;
};

// Default per-transition budget: 1.534M schemed frames over 496 transitions.
inline constexpr std::int64_t kDefaultFramesPerTransition = 3093;

// 496 schemed segments (pair k in region k mod 16), 16 random segments (one
// per region) and 32 egocentric segments (one per extremal pose). Random and
// egocentric totals keep the 1534 : 375 : 290 proportions of the schemed total.
CaptureSchedule generate_schedule(std::int64_t frames_per_transition = kDefaultFramesPerTransition);

struct CoverageReport {
  std::array<std::int64_t, kNumRegions> regions{};
  std::int64_t outside_hemisphere = 0;
  std::vector<std::int64_t> pairs;  // kNumPairs entries, enumerate_pairs order
};

// Each pose is credited to the extremal pair whose transition segment is
// nearest in limit-normalised flexion space (ties to the lower pair index).
int nearest_pair(const HandPose& pose, const JointLimits& limits = JointLimits::defaults());

CoverageReport coverage_report_serial(std::span<const HandPose> poses, const JointLimits& limits = JointLimits::defaults());
CoverageReport coverage_report(std::span<const HandPose> poses, const JointLimits& limits = JointLimits::defaults());

}  // namespace handann
