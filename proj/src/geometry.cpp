#include "handann/geometry.hpp"

#include <cmath>

#include <Eigen/SVD>

#include "handann/errors.hpp"

namespace handann {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::DegenerateGeometry: return "degenerate-geometry";
    case ErrorKind::MalformedFrame: return "malformed-frame";
    case ErrorKind::FrameMismatch: return "frame-mismatch";
    case ErrorKind::RankDeficient: return "rank-deficient";
    case ErrorKind::NotConverged: return "not-converged";
    case ErrorKind::OutOfDomain: return "out-of-domain";
    case ErrorKind::BehindCamera: return "behind-camera";
    case ErrorKind::NoPairs: return "no-pairs";
    case ErrorKind::Unsorted: return "unsorted";
    case ErrorKind::FileNotFound: return "file-not-found";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Usage: return "usage";
  }
  return "unknown";
}

Quat quat_exp(const Vec3& omega) {
  const double angle = omega.norm();
  if (angle < 1e-12) {
    // second-order accurate near zero
    Quat q(1.0, 0.5 * omega.x(), 0.5 * omega.y(), 0.5 * omega.z());
    return q.normalized();
  }
  return Quat(Eigen::AngleAxisd(angle, omega / angle));
}

double rotation_distance(const Quat& a, const Quat& b) {
  const Quat d = a.conjugate() * b;
  const double v = d.vec().norm();
  return 2.0 * std::atan2(v, std::abs(d.w()));
}

Quat canonical(const Quat& q) {
  if (q.w() < 0.0) return Quat(-q.w(), -q.x(), -q.y(), -q.z());
  return q;
}

double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

bool is_unit(const Quat& q, double tol) {
  return std::isfinite(q.norm()) && std::abs(q.norm() - 1.0) <= tol;
}

RigidTransform fit_rigid(const Eigen::Matrix3Xd& src, const Eigen::Matrix3Xd& dst) {
  if (src.cols() != dst.cols() || src.cols() < 3) {
    throw Error(ErrorKind::InvalidInput, "fit_rigid needs >= 3 matched points");
  }
  const Vec3 cs = src.rowwise().mean();
  const Vec3 cd = dst.rowwise().mean();
  const Mat3 cov = (dst.colwise() - cd) * (src.colwise() - cs).transpose();
  Eigen::JacobiSVD<Mat3> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.singularValues()(1) <= 1e-12 * std::max(1.0, svd.singularValues()(0))) {
    throw Error(ErrorKind::DegenerateGeometry, "fit_rigid: points are collinear");
  }
  Mat3 s = Mat3::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) s(2, 2) = -1.0;
  const Mat3 r = svd.matrixU() * s * svd.matrixV().transpose();
  RigidTransform out;
  out.rotation = Quat(r).normalized();
  out.translation = cd - r * cs;
  return out;
}

}  // namespace handann
