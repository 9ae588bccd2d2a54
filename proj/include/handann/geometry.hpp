#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace handann {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;

// Rotation followed by translation: x -> R x + t.
struct RigidTransform {
  Quat rotation = Quat::Identity();
  Vec3 translation = Vec3::Zero();

  static RigidTransform identity() { return {}; }

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  Vec3 apply_direction(const Vec3& v) const { return rotation * v; }

  RigidTransform inverse() const {
    const Quat inv = rotation.conjugate();
    return {inv, -(inv * translation)};
  }

  // (a * b).apply(x) == a.apply(b.apply(x))
  friend RigidTransform operator*(const RigidTransform& a, const RigidTransform& b) {
    return {(a.rotation * b.rotation).normalized(), a.rotation * b.translation + a.translation};
  }

  Mat3 rotation_matrix() const { return rotation.toRotationMatrix(); }
};

inline constexpr double kPi = 3.14159265358979323846;
inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

// Rotation of `angle` radians about a unit axis.
inline Quat axis_angle(const Vec3& axis, double angle) {
  return Quat(Eigen::AngleAxisd(angle, axis.normalized()));
}

// Exponential map of a rotation vector.
Quat quat_exp(const Vec3& omega);

// Angle of the relative rotation between two orientations, in [0, pi].
double rotation_distance(const Quat& a, const Quat& b);

// Quaternion with w >= 0 (q and -q encode the same rotation).
Quat canonical(const Quat& q);

// Wraps to (-pi, pi].
double wrap_angle(double a);

bool is_unit(const Quat& q, double tol = 1e-9);

// Least-squares rigid fit mapping `src` onto `dst` (columns are points).
RigidTransform fit_rigid(const Eigen::Matrix3Xd& src, const Eigen::Matrix3Xd& dst);

}  // namespace handann
