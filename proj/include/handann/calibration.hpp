#pragma once

#include <span>
#include <vector>

#include "handann/errors.hpp"
#include "handann/geometry.hpp"
#include "handann/hand_model.hpp"

namespace handann {

// Pinhole intrinsics, no distortion. A distortion model would slot in between
// the camera-frame point and the pixel in project()/the PnP residual.
struct CameraIntrinsics {
  double fx = 475.0;
  double fy = 475.0;
  double cx = 320.0;
  double cy = 240.0;
  int width = 640;
  int height = 480;

  void validate() const;
};

struct Correspondence {
  Vec3 tracker_point;  // mm
  Vec2 pixel;          // px
};

Vec2 project(const Vec3& point_camera, const CameraIntrinsics& k);
Vec3 unproject(const Vec2& pixel, double depth, const CameraIntrinsics& k);

struct PnpOptions {
  int max_iterations = 100;
  double gradient_tolerance = 1e-12;
};

struct PnpResult {
  RigidTransform tracker_to_camera;
  double rms_px = 0.0;  // sqrt(mean squared pixel residual norm)
  int iterations = 0;
  bool planar_init = false;
};

class PnpNotConverged : public Error {
 public:
  PnpNotConverged(const std::string& message, PnpResult best)
      : Error(ErrorKind::NotConverged, message), best_(best) {}
  const PnpResult& best() const { return best_; }

 private:
  PnpResult best_;
};

double reprojection_rms(std::span<const Correspondence> corrs, const CameraIntrinsics& k, const RigidTransform& x);

// Linear initialisation (DLT on normalised image coordinates; planar
// homography when the points are coplanar), then damped Gauss-Newton over
// rotation (on the manifold) and translation.
PnpResult solve_pnp(std::span<const Correspondence> corrs, const CameraIntrinsics& k, const PnpOptions& opts = {});

Skeleton apply_calibration(const Skeleton& skel, const RigidTransform& tracker_to_camera);

}  // namespace handann
