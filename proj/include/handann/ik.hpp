#pragma once

#include <array>
#include <optional>
#include <string>

#include "handann/hand_model.hpp"
#include "handann/kinematics.hpp"

namespace handann {

struct IkOptions {
  double feasibility_tau = 2.0;  // mm an infeasible M-D span may be clamped by
  double residual_tau = 1e-6;    // mm; larger circle residuals are not "exact"
};

enum class PipOutcome { Exact, Projected, Failed };

struct PipSolution {
  Vec3 position = Vec3::Constant(std::numeric_limits<double>::quiet_NaN());
  PipOutcome outcome = PipOutcome::Failed;
  // max(| |P-M| - b_mp |, | |P-D| - b_pd |) before any clamping, i.e. how far
  // the measured span is from admitting an exact triangle.
  double residual = 0.0;
  bool side_tie = false;  // T on line MD: choice fell back to the hint
  std::string message;
};

// Disambiguation when T lies on line MD (condition (4) gives no answer).
struct PipHint {
  std::optional<Vec3> plane_normal;   // finger-plane normal, e.g. the nail sensor's V3
  std::optional<Vec3> previous;       // P in the previous frame
  std::optional<Vec3> dorsal;         // palm normal (back of hand)
};

std::array<Vec3, 6> palm_from_s6(const SensorReading& s6, const HandShape& shape);

struct TipDip {
  Vec3 tip;
  Vec3 dip;
};
TipDip tip_dip_from_nail(const SensorReading& nail, const FingerShape& finger);

// P lies in the plane of (T, M, D), at b_mp from M and b_pd from D, on the
// opposite side of line MD from T.
PipSolution solve_pip(const Vec3& m, const Vec3& d, const Vec3& t, double b_mp, double b_pd,
                      const IkOptions& opts = {}, const PipHint& hint = {});

enum class AnnotationStatus { Exact, Projected, Failed };

struct FingerDiagnostics {
  double residual = 0.0;
  bool side_ok = false;  // T and P strictly on opposite sides of MD
  bool side_tie = false;
  PipOutcome outcome = PipOutcome::Failed;
};

struct AnnotationResult {
  Skeleton skeleton;  // tracker frame; a failed finger's P, D, T are NaN
  std::array<FingerDiagnostics, kNumFingers> fingers{};
  AnnotationStatus status = AnnotationStatus::Exact;
  unsigned failed_mask = 0;  // bit f set when finger f (0 = thumb) failed

  bool finger_failed(int f) const { return (failed_mask >> f) & 1u; }
};

std::string status_code(const AnnotationResult& r);

AnnotationResult annotate_frame(const SensorFrame& frame, const HandShape& shape, const IkOptions& opts = {},
                                const Skeleton* previous = nullptr);

// Global transform by rigid fit of the palm joints, finger angles from each
// chain. Throws InvalidInput if the skeleton fails skeleton_consistency.
HandPose extract_angles(const Skeleton& skeleton, const HandShape& shape, double tau_plane = 1e-6,
                        double tau_len = 1e-6);

}  // namespace handann
