#include "handann/ik.hpp"

#include <cmath>
#include <limits>

#include "handann/errors.hpp"

namespace handann {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Spans within this of b_mp + b_pd are treated as exactly tangent; below it
// the square root in the circle intersection amplifies rounding noise.
constexpr double kTangentSnap = 1e-12;

}  // namespace

std::array<Vec3, 6> palm_from_s6(const SensorReading& s6, const HandShape& shape) {
  if (!is_unit(s6.orientation)) throw Error(ErrorKind::InvalidInput, "S6 orientation is not a unit quaternion");
  const RigidTransform palm = s6.pose() * shape.s6_offset.inverse();
  std::array<Vec3, 6> out;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = palm.apply(shape.palm_points[i]);
  return out;
}

TipDip tip_dip_from_nail(const SensorReading& nail, const FingerShape& finger) {
  const Vec3 v1 = nail.v1();
  const Vec3 v2 = nail.v2();
  return {nail.position + finger.tip_offset() * v1 + finger.half_thickness * v2,
          nail.position - finger.dip_offset() * v1 + finger.half_thickness * v2};
}

PipSolution solve_pip(const Vec3& m, const Vec3& d, const Vec3& t, double b_mp, double b_pd, const IkOptions& opts,
                      const PipHint& hint) {
  PipSolution out;
  const Vec3 md = d - m;
  const double span = md.norm();
  if (!(span > 0.0) || !std::isfinite(span)) {
    out.message = "M and D coincide";
    out.residual = kNaN;
    return out;
  }
  const Vec3 axis = md / span;

  const double outer_slack = b_mp + b_pd - span;         // < 0: too far apart
  const double inner_slack = span - std::abs(b_mp - b_pd);  // < 0: too close
  if (outer_slack <= kTangentSnap || inner_slack <= kTangentSnap) {
    const double excess = outer_slack <= kTangentSnap ? -outer_slack : -inner_slack;
    out.residual = std::max(excess, 0.0);
    if (excess > opts.feasibility_tau) {
      out.message = "infeasible triangle: M-D span off by " + std::to_string(excess) + " mm";
      return out;
    }
    // Tangent configuration: P on line MD, b_mp from M toward (or past) D.
    const double along = outer_slack <= kTangentSnap ? b_mp : (b_mp > b_pd ? b_mp : -b_mp);
    out.position = m + along * axis;
    out.outcome = out.residual < opts.residual_tau ? PipOutcome::Exact : PipOutcome::Projected;
    return out;
  }

  // Foot of P on MD and its distance from the line; h^2 factored so the
  // small slack enters without cancellation.
  const double x = (span * span + b_mp * b_mp - b_pd * b_pd) / (2.0 * span);
  const double h2 = (b_mp + x) * outer_slack * (span - b_mp + b_pd) / (2.0 * span);
  const double h = std::sqrt(std::max(h2, 0.0));

  const Vec3 mt = t - m;
  Vec3 perp = mt - mt.dot(axis) * axis;
  const double off_line = perp.norm();
  const double scale = std::max({span, mt.norm(), 1.0});
  Vec3 dir;
  if (off_line > 1e-12 * scale) {
    dir = -perp / off_line;  // away from T
  } else {
    out.side_tie = true;
    out.message = "T on line MD; side chosen by hint";
    if (!hint.plane_normal) {
      out.message = "T on line MD and no plane hint";
      return out;
    }
    Vec3 n = *hint.plane_normal - hint.plane_normal->dot(axis) * axis;
    if (n.norm() < 1e-9) {
      out.message = "T on line MD and plane hint parallel to MD";
      return out;
    }
    dir = n.normalized().cross(axis);
    if (hint.previous) {
      const Vec3 a = m + x * axis + h * dir;
      const Vec3 b = m + x * axis - h * dir;
      if ((b - *hint.previous).norm() < (a - *hint.previous).norm()) dir = -dir;
    } else if (hint.dorsal && dir.dot(*hint.dorsal) < 0.0) {
      dir = -dir;
    }
  }
  out.position = m + x * axis + h * dir;
  out.residual = std::max(std::abs((out.position - m).norm() - b_mp), std::abs((out.position - d).norm() - b_pd));
  out.outcome = out.residual < opts.residual_tau ? PipOutcome::Exact : PipOutcome::Projected;
  return out;
}

std::string status_code(const AnnotationResult& r) {
  switch (r.status) {
    case AnnotationStatus::Exact: return "exact";
    case AnnotationStatus::Projected: return "projected";
    case AnnotationStatus::Failed: break;
  }
  std::string s = "failed:";
  for (int f = 0; f < kNumFingers; ++f) {
    if (r.finger_failed(f)) s += static_cast<char>('1' + f);
  }
  return s;
}

AnnotationResult annotate_frame(const SensorFrame& frame, const HandShape& shape, const IkOptions& opts,
                                const Skeleton* previous) {
  check_frame(frame);
  AnnotationResult result;
  Skeleton& skel = result.skeleton;
  skel.frame = Frame::Tracker;

  const SensorReading& s6 = frame.sensor(kPalmSensor);
  const auto palm = palm_from_s6(s6, shape);
  skel[JointId::W] = palm[0];
  const Vec3 dorsal = (s6.orientation * shape.s6_offset.rotation.conjugate()) * Vec3::UnitZ();

  bool any_projected = false;
  for (int f = 0; f < kNumFingers; ++f) {
    const FingerShape& fs = shape.fingers[static_cast<std::size_t>(f)];
    const SensorReading& nail = frame.sensor(f + 1);
    const Vec3& m = palm[static_cast<std::size_t>(f + 1)];
    const TipDip td = tip_dip_from_nail(nail, fs);

    PipHint hint;
    hint.plane_normal = nail.v3();
    hint.dorsal = dorsal;
    if (previous && previous->has(joint(f, Landmark::P))) hint.previous = previous->at(f, Landmark::P);
    const PipSolution pip = solve_pip(m, td.dip, td.tip, fs.proximal, fs.middle, opts, hint);

    FingerDiagnostics& diag = result.fingers[static_cast<std::size_t>(f)];
    diag.residual = pip.residual;
    diag.outcome = pip.outcome;
    diag.side_tie = pip.side_tie;
    skel.at(f, Landmark::M) = m;
    if (pip.outcome == PipOutcome::Failed) {
      result.failed_mask |= 1u << f;
      skel.at(f, Landmark::P) = skel.at(f, Landmark::D) = skel.at(f, Landmark::T) = Vec3::Constant(kNaN);
      continue;
    }
    any_projected |= pip.outcome == PipOutcome::Projected;
    const Vec3 axis = (td.dip - m).normalized();
    const auto side = [&](const Vec3& q) {
      const Vec3 v = q - m;
      return v - v.dot(axis) * axis;
    };
    diag.side_ok = side(td.tip).dot(side(pip.position)) < 0.0;
    skel.at(f, Landmark::P) = pip.position;
    skel.at(f, Landmark::D) = td.dip;
    skel.at(f, Landmark::T) = td.tip;
  }
  result.status = result.failed_mask ? AnnotationStatus::Failed
                   : any_projected    ? AnnotationStatus::Projected
                                      : AnnotationStatus::Exact;
  return result;
}

HandPose extract_angles(const Skeleton& skeleton, const HandShape& shape, double tau_plane, double tau_len) {
  if (auto r = skeleton_consistency(skeleton, shape, tau_plane, tau_len); !r) {
    throw Error(ErrorKind::InvalidInput, "inconsistent skeleton: " + r.violations.front());
  }
  HandPose pose;
  pose.global = fit_palm(skeleton, shape);
  pose.global.rotation = canonical(pose.global.rotation);
  const RigidTransform inv = pose.global.inverse();
  for (int f = 0; f < kNumFingers; ++f) {
    pose.fingers[static_cast<std::size_t>(f)] = finger_angles_from_chain(
        shape, f, inv.apply(skeleton.at(f, Landmark::M)), inv.apply(skeleton.at(f, Landmark::P)),
        inv.apply(skeleton.at(f, Landmark::D)), inv.apply(skeleton.at(f, Landmark::T)));
  }
  return pose;
}

}  // namespace handann
