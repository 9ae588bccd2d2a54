#pragma once

// Text formats. CSV files carry a header row; doubles are written in the
// shortest form that parses back to the same value, so every reader/writer
// pair round-trips bit-exactly.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "handann/calibration.hpp"
#include "handann/ik.hpp"
#include "handann/metrics.hpp"
#include "handann/protocol.hpp"
#include "handann/sync.hpp"

namespace handann::io {

std::string format_double(double v);

// `key = value` lines; `#` starts a comment. Later keys override earlier ones.
using KeyValues = std::map<std::string, std::string>;
KeyValues parse_key_values(const std::string& text, const std::string& source = "<string>");
KeyValues read_key_values(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

// Shape file keys:
//   palm.W, palm.M1 .. palm.M5          = x y z           (mm, palm-local)
//   finger.<1..5>.bones                  = proximal middle distal   (mm)
//   finger.<1..5>.half_thickness         = r               (mm)
//   finger.<1..5>.nail_fraction          = lambda          (0..1)
//   s6_offset.rotation                   = qw qx qy qz
//   s6_offset.translation                = x y z           (mm)
std::string format_shape(const HandShape& shape);
HandShape parse_shape(const std::string& text, const std::string& source = "<string>");
HandShape read_shape(const std::filesystem::path& path);

// Intrinsics keys: fx, fy, cx, cy, width, height.
std::string format_intrinsics(const CameraIntrinsics& k);
CameraIntrinsics read_intrinsics(const std::filesystem::path& path);

// Transform keys: rotation = qw qx qy qz, translation = x y z.
std::string format_transform(const RigidTransform& x);
RigidTransform parse_transform(const std::string& text, const std::string& source = "<string>");

// timestamp_us,sensor_id,x,y,z,qw,qx,qy,qz ; six rows per frame.
std::string format_sensor_log(const std::vector<SensorFrame>& frames);
std::vector<SensorFrame> parse_sensor_log(const std::string& text, const std::string& source = "<string>");

// timestamp_us, W_x, W_y, W_z, M1_x, ... T5_z, status
struct AnnotationRow {
  std::int64_t timestamp_us = 0;
  Skeleton skeleton;
  std::string status = "exact";
};
std::string format_annotations(const std::vector<AnnotationRow>& rows);
std::vector<AnnotationRow> parse_annotations(const std::string& text, const std::string& source = "<string>");

// x,y,z,u,v
std::string format_correspondences(const std::vector<Correspondence>& c);
std::vector<Correspondence> parse_correspondences(const std::string& text, const std::string& source = "<string>");

// timestamp_us,id
std::string format_events(const std::vector<TimedEvent>& e);
std::vector<TimedEvent> parse_events(const std::string& text, const std::string& source = "<string>");

// depth_id,sensor_id,gap_us,extrapolated
std::string format_pairs(const std::vector<SyncPair>& p);

// segment_type,pair_a,pair_b,region,frames
std::string format_schedule(const CaptureSchedule& s);
CaptureSchedule parse_schedule(const std::string& text, const std::string& source = "<string>");

// eps_mm,joints_within,frames_within
std::string format_curve(const std::vector<CurveRow>& rows);

}  // namespace handann::io
