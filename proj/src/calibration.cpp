#include "handann/calibration.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <fmt/format.h>

namespace handann {

namespace {

using Mat = Eigen::MatrixXd;

Vec2 normalized(const Vec2& px, const CameraIntrinsics& k) {
  return {(px.x() - k.cx) / k.fx, (px.y() - k.cy) / k.fy};
}

Mat3 nearest_rotation(const Mat3& a) {
  Eigen::JacobiSVD<Mat3> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 s = Mat3::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0) s(2, 2) = -1;
  return svd.matrixU() * s * svd.matrixV().transpose();
}

struct PointStats {
  Vec3 centroid;
  Mat3 axes;       // principal directions, columns by decreasing spread
  Vec3 spread;     // singular values
};

PointStats point_stats(std::span<const Correspondence> corrs) {
  Vec3 c = Vec3::Zero();
  for (const auto& cr : corrs) c += cr.tracker_point;
  c /= static_cast<double>(corrs.size());
  Mat3 cov = Mat3::Zero();
  for (const auto& cr : corrs) {
    const Vec3 v = cr.tracker_point - c;
    cov += v * v.transpose();
  }
  Eigen::JacobiSVD<Mat3> svd(cov, Eigen::ComputeFullU);
  return {c, svd.matrixU(), svd.singularValues().cwiseSqrt()};
}

// Full 3D DLT. Returns false when the 12-vector null space is not 1-D.
bool dlt_init(std::span<const Correspondence> corrs, const CameraIntrinsics& k, const PointStats& st,
              RigidTransform& out) {
  const double scale = std::sqrt(3.0 * static_cast<double>(corrs.size())) / st.spread.norm();
  const auto n = static_cast<Eigen::Index>(corrs.size());
  Mat a = Mat::Zero(2 * n, 12);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& cr = corrs[static_cast<std::size_t>(i)];
    const Vec3 x = scale * (cr.tracker_point - st.centroid);
    const Vec2 u = normalized(cr.pixel, k);
    const Eigen::Vector4d xh(x.x(), x.y(), x.z(), 1.0);
    a.block<1, 4>(2 * i, 0) = xh.transpose();
    a.block<1, 4>(2 * i, 8) = -u.x() * xh.transpose();
    a.block<1, 4>(2 * i + 1, 4) = xh.transpose();
    a.block<1, 4>(2 * i + 1, 8) = -u.y() * xh.transpose();
  }
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(10) < 1e-8 * sv(0)) return false;
  const Eigen::VectorXd p = svd.matrixV().col(11);
  Eigen::Matrix<double, 3, 4> pm;
  pm << p.segment<4>(0).transpose(), p.segment<4>(4).transpose(), p.segment<4>(8).transpose();
  // Undo the point normalisation: x' = scale (X - c).
  Mat3 m = scale * pm.leftCols<3>();
  Vec3 b = pm.col(3) - m * st.centroid;
  if (m.determinant() < 0) {
    m = -m;
    b = -b;
  }
  Eigen::JacobiSVD<Mat3> msvd(m);
  const double lambda = msvd.singularValues().mean();
  out.rotation = Quat(nearest_rotation(m)).normalized();
  out.translation = b / lambda;
  return true;
}

// Coplanar points: homography between plane coordinates and the image.
RigidTransform planar_init(std::span<const Correspondence> corrs, const CameraIntrinsics& k, const PointStats& st) {
  const auto n = static_cast<Eigen::Index>(corrs.size());
  const double scale = std::sqrt(2.0 * static_cast<double>(n)) / st.spread.head<2>().norm();
  Mat a = Mat::Zero(2 * n, 9);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& cr = corrs[static_cast<std::size_t>(i)];
    const Vec3 local = st.axes.transpose() * (cr.tracker_point - st.centroid);
    const Vec3 q(scale * local.x(), scale * local.y(), 1.0);
    const Vec2 u = normalized(cr.pixel, k);
    a.block<1, 3>(2 * i, 0) = q.transpose();
    a.block<1, 3>(2 * i, 6) = -u.x() * q.transpose();
    a.block<1, 3>(2 * i + 1, 3) = q.transpose();
    a.block<1, 3>(2 * i + 1, 6) = -u.y() * q.transpose();
  }
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd h = svd.matrixV().col(8);
  Mat3 hm;
  hm << h.segment<3>(0).transpose(), h.segment<3>(3).transpose(), h.segment<3>(6).transpose();
  // Columns: scale*r1, scale*r2, t' (up to a common factor).
  Vec3 r1 = hm.col(0) * scale;
  Vec3 r2 = hm.col(1) * scale;
  Vec3 tp = hm.col(2);
  double lambda = 0.5 * (r1.norm() + r2.norm());
  if (tp.z() < 0) lambda = -lambda;
  r1 /= lambda;
  r2 /= lambda;
  tp /= lambda;
  Mat3 rp;
  rp.col(0) = r1;
  rp.col(1) = r2;
  rp.col(2) = r1.cross(r2);
  const Mat3 r = nearest_rotation(rp) * st.axes.transpose();
  RigidTransform out;
  out.rotation = Quat(r).normalized();
  out.translation = tp - r * st.centroid;
  return out;
}

double cost(std::span<const Correspondence> corrs, const CameraIntrinsics& k, const RigidTransform& x) {
  double c = 0.0;
  for (const auto& cr : corrs) {
    const Vec3 pc = x.apply(cr.tracker_point);
    if (pc.z() <= 0) return std::numeric_limits<double>::infinity();
    c += (project(pc, k) - cr.pixel).squaredNorm();
  }
  return c;
}

}  // namespace

void CameraIntrinsics::validate() const {
  if (!(fx > 0) || !(fy > 0)) throw Error(ErrorKind::InvalidInput, "focal lengths must be positive");
  if (width <= 0 || height <= 0) throw Error(ErrorKind::InvalidInput, "image size must be positive");
  if (!(cx >= 0 && cx <= width && cy >= 0 && cy <= height)) {
    throw Error(ErrorKind::InvalidInput, "principal point outside the image");
  }
}

Vec2 project(const Vec3& p, const CameraIntrinsics& k) {
  if (!(p.z() > 0)) throw Error(ErrorKind::BehindCamera, "point has non-positive depth");
  return {k.fx * p.x() / p.z() + k.cx, k.fy * p.y() / p.z() + k.cy};
}

Vec3 unproject(const Vec2& px, double depth, const CameraIntrinsics& k) {
  if (!(depth > 0)) throw Error(ErrorKind::BehindCamera, "depth must be positive");
  return {(px.x() - k.cx) / k.fx * depth, (px.y() - k.cy) / k.fy * depth, depth};
}

double reprojection_rms(std::span<const Correspondence> corrs, const CameraIntrinsics& k, const RigidTransform& x) {
  if (corrs.empty()) throw Error(ErrorKind::InvalidInput, "no correspondences");
  return std::sqrt(cost(corrs, k, x) / static_cast<double>(corrs.size()));
}

PnpResult solve_pnp(std::span<const Correspondence> corrs, const CameraIntrinsics& k, const PnpOptions& opts) {
  k.validate();
  if (corrs.size() < 6) {
    throw Error(ErrorKind::InvalidInput, fmt::format("PnP needs at least 6 correspondences, got {}", corrs.size()));
  }
  for (const auto& cr : corrs) {
    if (!cr.tracker_point.allFinite() || !cr.pixel.allFinite()) {
      throw Error(ErrorKind::InvalidInput, "non-finite correspondence");
    }
  }
  const PointStats st = point_stats(corrs);
  if (st.spread(1) < 1e-6 * std::max(1.0, st.spread(0))) {
    throw Error(ErrorKind::RankDeficient, "correspondences are collinear");
  }

  PnpResult result;
  RigidTransform x;
  if (st.spread(2) < 1e-6 * st.spread(0) || !dlt_init(corrs, k, st, x)) {
    x = planar_init(corrs, k, st);
    result.planar_init = true;
  }

  double current = cost(corrs, k, x);
  double mu = 1e-4;
  bool converged = false;
  int iter = 0;
  for (; iter < opts.max_iterations; ++iter) {
    Eigen::Matrix<double, 6, 6> jtj = Eigen::Matrix<double, 6, 6>::Zero();
    Eigen::Matrix<double, 6, 1> jtr = Eigen::Matrix<double, 6, 1>::Zero();
    for (const auto& cr : corrs) {
      const Vec3 rx = x.rotation * cr.tracker_point;
      const Vec3 pc = rx + x.translation;
      const double iz = 1.0 / pc.z();
      Eigen::Matrix<double, 2, 3> dproj;
      dproj << k.fx * iz, 0.0, -k.fx * pc.x() * iz * iz, 0.0, k.fy * iz, -k.fy * pc.y() * iz * iz;
      Mat3 skew;
      skew << 0, -rx.z(), rx.y(), rx.z(), 0, -rx.x(), -rx.y(), rx.x(), 0;
      Eigen::Matrix<double, 2, 6> j;
      j.leftCols<3>() = -dproj * skew;
      j.rightCols<3>() = dproj;
      const Vec2 r = Vec2(k.fx * pc.x() * iz + k.cx, k.fy * pc.y() * iz + k.cy) - cr.pixel;
      jtj += j.transpose() * j;
      jtr += j.transpose() * r;
    }
    if (jtr.norm() <= opts.gradient_tolerance) {
      converged = true;
      break;
    }
    bool stepped = false;
    while (mu < 1e16) {
      Eigen::Matrix<double, 6, 6> a = jtj;
      a.diagonal() += mu * jtj.diagonal().cwiseMax(1e-12);
      const Eigen::Matrix<double, 6, 1> delta = a.ldlt().solve(-jtr);
      RigidTransform trial;
      trial.rotation = (quat_exp(delta.head<3>()) * x.rotation).normalized();
      trial.translation = x.translation + delta.tail<3>();
      const double c = cost(corrs, k, trial);
      if (c < current) {
        const double gain = current - c;
        x = trial;
        current = c;
        mu = std::max(mu / 3.0, 1e-12);
        stepped = true;
        if (gain <= 1e-15 * (current + 1e-300) ||
            delta.norm() <= 1e-14 * (1.0 + x.translation.norm())) {
          converged = true;
        }
        break;
      }
      mu *= 4.0;
    }
    if (!stepped) {
      // No descent direction left above rounding noise.
      converged = true;
      break;
    }
    if (converged) {
      ++iter;
      break;
    }
  }

  result.tracker_to_camera = {canonical(x.rotation), x.translation};
  result.rms_px = std::sqrt(current / static_cast<double>(corrs.size()));
  result.iterations = iter;
  if (!converged) {
    throw PnpNotConverged(
        fmt::format("PnP did not converge in {} iterations (rms {:.6g} px)", opts.max_iterations, result.rms_px),
        result);
  }
  return result;
}

Skeleton apply_calibration(const Skeleton& skel, const RigidTransform& x) {
  if (skel.frame != Frame::Tracker) {
    throw Error(ErrorKind::FrameMismatch,
                fmt::format("expected a tracker-frame skeleton, got {}", frame_name(skel.frame)));
  }
  Skeleton out;
  out.frame = Frame::Camera;
  for (std::size_t i = 0; i < skel.positions.size(); ++i) out.positions[i] = x.apply(skel.positions[i]);
  return out;
}

}  // namespace handann
