#include "handann/hand_model.hpp"

#include <cmath>
#include <fmt/format.h>

#include "handann/errors.hpp"

namespace handann {

namespace {

constexpr std::array<std::string_view, kNumJoints> kJointNames = {
    "W",
    "M1", "P1", "D1", "T1",
    "M2", "P2", "D2", "T2",
    "M3", "P3", "D3", "T3",
    "M4", "P4", "D4", "T4",
    "M5", "P5", "D5", "T5",
};

}  // namespace

std::string_view joint_name(JointId id) { return kJointNames[static_cast<std::size_t>(index(id))]; }

std::optional<JointId> parse_joint(std::string_view name) {
  for (int i = 0; i < kNumJoints; ++i) {
    if (kJointNames[static_cast<std::size_t>(i)] == name) return static_cast<JointId>(i);
  }
  return std::nullopt;
}

std::string_view frame_name(Frame f) {
  switch (f) {
    case Frame::Tracker: return "tracker";
    case Frame::Camera: return "camera";
    case Frame::PalmLocal: return "palm-local";
  }
  return "?";
}

bool Skeleton::has(JointId id) const { return (*this)[id].allFinite(); }

HandShape HandShape::default_shape() {
  HandShape s;
  // Right hand seen from the back: thumb toward +y.
  s.palm_points = {Vec3(0, 0, 0),       Vec3(28, 38, -12), Vec3(88, 22, 0),
                   Vec3(92, 0, 0),      Vec3(86, -18, -2), Vec3(78, -34, -5)};
  s.fingers[0] = {40.0, 31.0, 27.0, 8.5, 0.5};
  s.fingers[1] = {44.0, 26.0, 21.0, 7.0, 0.5};
  s.fingers[2] = {48.0, 29.0, 23.0, 7.5, 0.5};
  s.fingers[3] = {45.0, 28.0, 22.0, 7.0, 0.5};
  s.fingers[4] = {36.0, 21.0, 20.0, 6.0, 0.5};
  // Sensor glued on the back of the palm, roughly over its centre.
  s.s6_offset.rotation = Quat::Identity();
  s.s6_offset.translation = Vec3(45.0, 0.0, 14.0);
  return s;
}

JointLimits JointLimits::defaults() {
  JointLimits l;
  l.mcp_flexion = {deg2rad(-30), deg2rad(100)};
  l.mcp_abduction = {deg2rad(-25), deg2rad(25)};
  l.mcp_twist = {deg2rad(-15), deg2rad(15)};
  l.pip_flexion = {deg2rad(0), deg2rad(110)};
  // Lower bound 0 rather than -10 deg: a hyperextended DIP with a nearly
  // straight PIP puts T on P's side of line MD and the PIP solve picks the
  // mirrored solution.
  l.dip_flexion = {deg2rad(0), deg2rad(90)};
  return l;
}

Mat3 finger_base_frame(const HandShape& shape, int finger) {
  const Vec3 axis = (shape.mcp(finger) - shape.wrist()).normalized();
  const Vec3 lateral = Vec3::UnitZ().cross(axis).normalized();
  const Vec3 dorsal = axis.cross(lateral);
  Mat3 f;
  f.col(0) = axis;
  f.col(1) = lateral;
  f.col(2) = dorsal;
  return f;
}

ValidationReport validate_shape(const HandShape& shape) {
  ValidationReport r;
  for (int f = 0; f < kNumFingers; ++f) {
    const FingerShape& fs = shape.fingers[static_cast<std::size_t>(f)];
    for (double len : {fs.proximal, fs.middle, fs.distal}) {
      if (!(len > 0.0) || !std::isfinite(len)) {
        r.violations.push_back(fmt::format("finger {}: nonpositive bone length", f + 1));
        break;
      }
    }
    if (!(fs.half_thickness > 0.0) || !std::isfinite(fs.half_thickness)) {
      r.violations.push_back(fmt::format("finger {}: nonpositive half thickness", f + 1));
    }
    if (!(fs.nail_fraction > 0.0 && fs.nail_fraction < 1.0)) {
      r.violations.push_back(fmt::format("finger {}: nail fraction out of range", f + 1));
    }
  }
  for (std::size_t i = 0; i < shape.palm_points.size(); ++i) {
    if (!shape.palm_points[i].allFinite()) {
      r.violations.push_back(fmt::format("palm point {} not finite", i));
      return r;
    }
    for (std::size_t j = i + 1; j < shape.palm_points.size(); ++j) {
      if ((shape.palm_points[i] - shape.palm_points[j]).norm() < 1e-6) {
        r.violations.push_back(fmt::format("palm points {} and {} coincide", i, j));
      }
    }
  }
  if (!r.ok()) return r;
  for (int f = 0; f < kNumFingers; ++f) {
    const Vec3 axis = (shape.mcp(f) - shape.wrist()).normalized();
    if (Vec3::UnitZ().cross(axis).norm() < 1e-6) {
      r.violations.push_back(fmt::format("finger {}: rest direction parallel to palm normal", f + 1));
    }
  }
  if (!is_unit(shape.s6_offset.rotation) || !shape.s6_offset.translation.allFinite()) {
    r.violations.push_back("s6_offset rotation not a unit quaternion");
  }
  return r;
}

ValidationReport validate_pose(const HandPose& pose, const JointLimits& limits) {
  ValidationReport r;
  if (!is_unit(pose.global.rotation)) r.violations.push_back("global rotation not unit-norm");
  if (!pose.global.translation.allFinite()) r.violations.push_back("global translation not finite");
  auto check = [&](int f, const char* name, double v, const AngleRange& range) {
    if (!std::isfinite(v) || !range.contains(v)) {
      r.violations.push_back(fmt::format("finger {}: {} = {:.3f} deg outside [{:.1f}, {:.1f}]", f + 1,
                                         name, rad2deg(v), rad2deg(range.lo), rad2deg(range.hi)));
    }
  };
  for (int f = 0; f < kNumFingers; ++f) {
    const FingerPose& fp = pose.fingers[static_cast<std::size_t>(f)];
    check(f, "mcp_twist", fp.mcp_twist, limits.mcp_twist);
    check(f, "mcp_flexion", fp.mcp_flexion, limits.mcp_flexion);
    check(f, "mcp_abduction", fp.mcp_abduction, limits.mcp_abduction);
    check(f, "pip_flexion", fp.pip_flexion, limits.pip_flexion);
    check(f, "dip_flexion", fp.dip_flexion, limits.dip_flexion);
  }
  return r;
}

ValidationReport skeleton_consistency(const Skeleton& skel, const HandShape& shape, double tau_plane,
                                      double tau_len) {
  ValidationReport r;
  for (int i = 0; i < kNumJoints; ++i) {
    if (!skel.has(static_cast<JointId>(i))) {
      r.violations.push_back(fmt::format("joint {} missing", joint_name(static_cast<JointId>(i))));
    }
  }
  if (!r.ok()) return r;

  // Palm rigidity: pairwise distances of W, M1..M5.
  std::array<Vec3, 6> palm{skel[JointId::W]};
  for (int f = 0; f < kNumFingers; ++f) palm[static_cast<std::size_t>(f + 1)] = skel.at(f, Landmark::M);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = i + 1; j < 6; ++j) {
      const double want = (shape.palm_points[i] - shape.palm_points[j]).norm();
      const double got = (palm[i] - palm[j]).norm();
      if (std::abs(want - got) > tau_len) {
        r.violations.push_back(fmt::format("palm distance {}-{} off by {:.3g} mm", i, j, got - want));
      }
    }
  }

  for (int f = 0; f < kNumFingers; ++f) {
    const FingerShape& fs = shape.fingers[static_cast<std::size_t>(f)];
    const Vec3& m = skel.at(f, Landmark::M);
    const Vec3& p = skel.at(f, Landmark::P);
    const Vec3& d = skel.at(f, Landmark::D);
    const Vec3& t = skel.at(f, Landmark::T);
    const std::array<std::pair<double, double>, 3> lens = {
        std::pair{(p - m).norm(), fs.proximal}, std::pair{(d - p).norm(), fs.middle},
        std::pair{(t - d).norm(), fs.distal}};
    for (std::size_t k = 0; k < lens.size(); ++k) {
      if (std::abs(lens[k].first - lens[k].second) > tau_len) {
        r.violations.push_back(fmt::format("finger {}: bone {} length off by {:.3g} mm", f + 1, k,
                                           lens[k].first - lens[k].second));
      }
    }
    // Coplanarity of M, P, D, T: distance of the farthest point from the
    // plane through the best-conditioned triple.
    const std::array<Vec3, 4> pts = {m, p, d, t};
    double best = 0.0;
    Vec3 normal = Vec3::Zero();
    Vec3 origin = m;
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t b = a + 1; b < 4; ++b) {
        for (std::size_t c = b + 1; c < 4; ++c) {
          const Vec3 n = (pts[b] - pts[a]).cross(pts[c] - pts[a]);
          if (n.norm() > best) {
            best = n.norm();
            normal = n;
            origin = pts[a];
          }
        }
      }
    }
    if (best > 1e-12) {
      normal /= best;
      double off = 0.0;
      for (const Vec3& q : pts) off = std::max(off, std::abs(normal.dot(q - origin)));
      if (off > tau_plane) {
        r.violations.push_back(fmt::format("finger {}: joints off plane by {:.3g} mm", f + 1, off));
      }
    }
  }
  return r;
}

}  // namespace handann
