#include "handann/kinematics.hpp"

#include <cmath>
#include <string>

#include "handann/errors.hpp"

namespace handann {

namespace {

Mat3 rot_x(double a) { return Eigen::AngleAxisd(a, Vec3::UnitX()).toRotationMatrix(); }
Mat3 rot_y(double a) { return Eigen::AngleAxisd(a, Vec3::UnitY()).toRotationMatrix(); }
Mat3 rot_z(double a) { return Eigen::AngleAxisd(a, Vec3::UnitZ()).toRotationMatrix(); }

std::string join(const ValidationReport& r) {
  std::string out;
  for (const auto& v : r.violations) {
    if (!out.empty()) out += "; ";
    out += v;
  }
  return out;
}

// Nail-sensor orientation from the distal segment frame: V1 = bone axis,
// V2 = -dorsal, V3 = lateral.
Quat nail_orientation(const Vec3& v1, const Vec3& lateral) {
  const Vec3 v3 = (lateral - lateral.dot(v1) * v1).normalized();
  const Vec3 v2 = v3.cross(v1);
  Mat3 r;
  r.col(0) = v1;
  r.col(1) = v2;
  r.col(2) = v3;
  return canonical(Quat(r).normalized());
}

SensorReading nail_reading(int finger, const FingerShape& fs, const Vec3& d, const Vec3& t, const Vec3& lateral) {
  const Vec3 v1 = (t - d).normalized();
  SensorReading s;
  s.sensor_id = finger + 1;
  s.orientation = nail_orientation(v1, lateral);
  s.position = t - fs.tip_offset() * s.v1() - fs.half_thickness * s.v2();
  return s;
}

}  // namespace

void check_frame(const SensorFrame& frame) {
  if (frame.timestamp_us < 0) throw Error(ErrorKind::MalformedFrame, "negative timestamp");
  for (int id = 1; id <= kNumSensors; ++id) {
    const SensorReading& r = frame.sensor(id);
    if (r.sensor_id != id) {
      throw Error(ErrorKind::MalformedFrame, "frame at t=" + std::to_string(frame.timestamp_us) +
                                                 " is missing sensor S" + std::to_string(id));
    }
    if (!is_unit(r.orientation) || !r.position.allFinite()) {
      throw Error(ErrorKind::MalformedFrame, "sensor S" + std::to_string(id) + " has an invalid pose");
    }
  }
}

FingerFrames finger_frames(const HandShape& shape, int finger, const FingerPose& fp) {
  FingerFrames f;
  f.proximal = finger_base_frame(shape, finger) * rot_z(fp.mcp_abduction) * rot_y(fp.mcp_flexion) *
               rot_x(fp.mcp_twist);
  f.middle = f.proximal * rot_y(fp.pip_flexion);
  f.distal = f.middle * rot_y(fp.dip_flexion);
  return f;
}

Skeleton forward_kinematics(const HandShape& shape, const HandPose& pose, const JointLimits& limits) {
  if (auto r = validate_shape(shape); !r) throw Error(ErrorKind::InvalidInput, "invalid shape: " + join(r));
  if (auto r = validate_pose(pose, limits); !r) throw Error(ErrorKind::InvalidInput, "invalid pose: " + join(r));

  Skeleton s;
  s.frame = Frame::Tracker;
  const RigidTransform& g = pose.global;
  s[JointId::W] = g.apply(shape.wrist());
  for (int f = 0; f < kNumFingers; ++f) {
    const FingerShape& fs = shape.fingers[static_cast<std::size_t>(f)];
    const FingerFrames fr = finger_frames(shape, f, pose.fingers[static_cast<std::size_t>(f)]);
    const Vec3 m = shape.mcp(f);
    const Vec3 p = m + fs.proximal * fr.proximal.col(0);
    const Vec3 d = p + fs.middle * fr.middle.col(0);
    const Vec3 t = d + fs.distal * fr.distal.col(0);
    s.at(f, Landmark::M) = g.apply(m);
    s.at(f, Landmark::P) = g.apply(p);
    s.at(f, Landmark::D) = g.apply(d);
    s.at(f, Landmark::T) = g.apply(t);
  }
  return s;
}

RigidTransform fit_palm(const Skeleton& skeleton, const HandShape& shape) {
  Eigen::Matrix3Xd src(3, 6), dst(3, 6);
  src.col(0) = shape.wrist();
  dst.col(0) = skeleton[JointId::W];
  for (int f = 0; f < kNumFingers; ++f) {
    src.col(f + 1) = shape.mcp(f);
    dst.col(f + 1) = skeleton.at(f, Landmark::M);
  }
  return fit_rigid(src, dst);
}

FingerPose finger_angles_from_chain(const HandShape& shape, int finger, const Vec3& m, const Vec3& p,
                                    const Vec3& d, const Vec3& t) {
  const Mat3 base = finger_base_frame(shape, finger);
  const Vec3 a = (base.transpose() * (p - m)).normalized();
  const Vec3 u2 = (base.transpose() * (d - p)).normalized();
  const Vec3 u3 = (base.transpose() * (t - d)).normalized();

  FingerPose fp;
  double abd = std::atan2(a.y(), a.x());
  if (abd > kPi / 2) abd -= kPi;
  if (abd <= -kPi / 2) abd += kPi;
  const double ca = std::cos(abd), sa = std::sin(abd);
  fp.mcp_abduction = abd;
  fp.mcp_flexion = std::atan2(-a.z(), a.x() * ca + a.y() * sa);

  // Finger-plane normal from whichever later segment bends away from the
  // proximal axis the most.
  const Vec3 n2 = a.cross(u2);
  const Vec3 n3 = a.cross(u3);
  const Vec3 n = n2.norm() >= n3.norm() ? n2 : n3;
  const Vec3 untwisted(-sa, ca, 0.0);
  Vec3 lateral = untwisted;
  if (n.norm() > 1e-12) {
    lateral = (n - n.dot(a) * a).normalized();
    double twist = std::atan2(a.dot(untwisted.cross(lateral)), untwisted.dot(lateral));
    if (twist > kPi / 2 || twist <= -kPi / 2) {
      lateral = -lateral;
      twist = std::atan2(a.dot(untwisted.cross(lateral)), untwisted.dot(lateral));
    }
    fp.mcp_twist = twist;
  }
  const Vec3 dorsal1 = a.cross(lateral);
  fp.pip_flexion = std::atan2(-u2.dot(dorsal1), u2.dot(a));
  const Vec3 dorsal2 = u2.cross(lateral);
  fp.dip_flexion = std::atan2(-u3.dot(dorsal2), u3.dot(u2));
  return fp;
}

SensorFrame simulate_sensors(const HandShape& shape, const Skeleton& skeleton, std::int64_t timestamp_us) {
  for (int i = 0; i < kNumJoints; ++i) {
    if (!skeleton.has(static_cast<JointId>(i))) {
      throw Error(ErrorKind::InvalidInput, "skeleton is missing joints");
    }
  }
  const RigidTransform g = fit_palm(skeleton, shape);
  const RigidTransform g_inv = g.inverse();

  SensorFrame frame;
  frame.timestamp_us = timestamp_us;
  for (int f = 0; f < kNumFingers; ++f) {
    const Vec3& d = skeleton.at(f, Landmark::D);
    const Vec3& t = skeleton.at(f, Landmark::T);
    if ((t - d).norm() < 1e-6) {
      throw Error(ErrorKind::DegenerateGeometry, "finger " + std::to_string(f + 1) + ": distal bone has zero length");
    }
    const FingerPose fp = finger_angles_from_chain(shape, f, g_inv.apply(skeleton.at(f, Landmark::M)),
                                                   g_inv.apply(skeleton.at(f, Landmark::P)), g_inv.apply(d),
                                                   g_inv.apply(t));
    const FingerFrames fr = finger_frames(shape, f, fp);
    const Vec3 lateral = g.apply_direction(fr.distal.col(1));
    frame.readings[static_cast<std::size_t>(f)] =
        nail_reading(f, shape.fingers[static_cast<std::size_t>(f)], d, t, lateral);
  }
  const RigidTransform s6 = g * shape.s6_offset;
  frame.sensor(kPalmSensor) = {kPalmSensor, s6.translation, canonical(s6.rotation)};
  return frame;
}

SensorFrame simulate_sensors_from_pose(const HandShape& shape, const HandPose& pose, std::int64_t timestamp_us) {
  const Skeleton skel = forward_kinematics(shape, pose);
  const RigidTransform& g = pose.global;
  SensorFrame frame;
  frame.timestamp_us = timestamp_us;
  for (int f = 0; f < kNumFingers; ++f) {
    const FingerFrames fr = finger_frames(shape, f, pose.fingers[static_cast<std::size_t>(f)]);
    frame.readings[static_cast<std::size_t>(f)] =
        nail_reading(f, shape.fingers[static_cast<std::size_t>(f)], skel.at(f, Landmark::D),
                     skel.at(f, Landmark::T), g.apply_direction(fr.distal.col(1)));
  }
  const RigidTransform s6 = g * shape.s6_offset;
  frame.sensor(kPalmSensor) = {kPalmSensor, s6.translation, canonical(s6.rotation)};
  return frame;
}

SensorFrame add_sensor_noise(const SensorFrame& frame, double sigma_pos_mm, double sigma_rot_deg, Rng& rng) {
  std::normal_distribution<double> pos(0.0, sigma_pos_mm > 0 ? sigma_pos_mm : 1.0);
  std::normal_distribution<double> rot(0.0, sigma_rot_deg > 0 ? deg2rad(sigma_rot_deg) : 1.0);
  SensorFrame out = frame;
  for (SensorReading& r : out.readings) {
    if (sigma_pos_mm > 0) r.position += Vec3(pos(rng), pos(rng), pos(rng));
    if (sigma_rot_deg > 0) {
      r.orientation = canonical((quat_exp(Vec3(rot(rng), rot(rng), rot(rng))) * r.orientation).normalized());
    }
  }
  return out;
}

}  // namespace handann
