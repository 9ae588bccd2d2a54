#include <filesystem>

#include <doctest.h>

#include "handann/batch.hpp"
#include "handann/io.hpp"
#include "handann/sampling.hpp"
#include "support.hpp"

using namespace handann;

namespace {

std::vector<SensorFrame> noisy_frames(int n) {
  Rng rng(5);
  const HandShape shape = HandShape::default_shape();
  std::vector<HandPose> poses;
  std::vector<std::int64_t> ts;
  for (int i = 0; i < n; ++i) {
    poses.push_back(random_pose(rng));
    ts.push_back(1389LL * i);
  }
  std::vector<SensorFrame> out;
  for (const auto& f : simulate_frames_serial(poses, ts, shape, {3, 0.7, 0.4})) out.push_back(f.sensors);
  return out;
}

}  // namespace

TEST_CASE("format_double is shortest round-trip") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.123456789, 0.0, 5e-324}) {
    CHECK(std::strtod(io::format_double(v).c_str(), nullptr) == v);
  }
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(std::nan("")) == "nan");
}

TEST_CASE("key/value parsing") {
  const auto kv = io::parse_key_values("# comment\n a = 1 2 3 \n\nb=x # trailing\na = 4\n");
  CHECK(kv.at("a") == "4");
  CHECK(kv.at("b") == "x");
  CHECK(test::thrown_kind([] { io::parse_key_values("no equals sign\n"); }) == ErrorKind::Parse);
}

TEST_CASE("shape file round trip") {
  Rng rng(9);
  const HandShape s = random_shape(rng);
  const HandShape t = io::parse_shape(io::format_shape(s));
  for (int i = 0; i < 6; ++i) CHECK(t.palm_points[i] == s.palm_points[i]);
  for (int f = 0; f < kNumFingers; ++f) {
    CHECK(t.fingers[f].proximal == s.fingers[f].proximal);
    CHECK(t.fingers[f].middle == s.fingers[f].middle);
    CHECK(t.fingers[f].distal == s.fingers[f].distal);
    CHECK(t.fingers[f].half_thickness == s.fingers[f].half_thickness);
    CHECK(t.fingers[f].nail_fraction == s.fingers[f].nail_fraction);
  }
  CHECK(t.s6_offset.rotation.coeffs() == s.s6_offset.rotation.coeffs());
  CHECK(t.s6_offset.translation == s.s6_offset.translation);
  CHECK(io::format_shape(t) == io::format_shape(s));

  std::string text = io::format_shape(s);
  text.replace(text.find("finger.2.bones"), 14, "finger.2.bonez");
  CHECK(test::thrown_kind([&] { io::parse_shape(text); }) == ErrorKind::Parse);
}

TEST_CASE("transform and intrinsics round trip") {
  Rng rng(2);
  const RigidTransform x{random_rotation(rng), Vec3(1.0 / 3.0, -7.25, 601.000001)};
  const RigidTransform y = io::parse_transform(io::format_transform(x));
  CHECK(y.rotation.coeffs() == x.rotation.coeffs());
  CHECK(y.translation == x.translation);

  const auto dir = std::filesystem::temp_directory_path() / "handann_io_test";
  std::filesystem::create_directories(dir);
  CameraIntrinsics k;
  k.fx = 500.125;
  k.cy = 250.5;
  io::write_file(dir / "k.cfg", io::format_intrinsics(k));
  const CameraIntrinsics k2 = io::read_intrinsics(dir / "k.cfg");
  CHECK(k2.fx == k.fx);
  CHECK(k2.cy == k.cy);
  CHECK(k2.width == 640);
  CHECK(test::thrown_kind([&] { io::read_file(dir / "absent.csv"); }) == ErrorKind::FileNotFound);
}

TEST_CASE("sensor log round trip is bit-exact") {
  const auto frames = noisy_frames(50);
  const std::string text = io::format_sensor_log(frames);
  CHECK(text.substr(0, text.find('\n')) == "timestamp_us,sensor_id,x,y,z,qw,qx,qy,qz");
  const auto back = io::parse_sensor_log(text);
  REQUIRE(back.size() == frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    CHECK(back[i].timestamp_us == frames[i].timestamp_us);
    for (int id = 1; id <= kNumSensors; ++id) {
      CHECK(back[i].sensor(id).sensor_id == id);
      CHECK(back[i].sensor(id).position == frames[i].sensor(id).position);
      CHECK(back[i].sensor(id).orientation.coeffs() == frames[i].sensor(id).orientation.coeffs());
    }
  }
  CHECK(io::format_sensor_log(back) == text);
}

TEST_CASE("sensor log parse errors carry the line") {
  std::string bad = "timestamp_us,sensor_id,x,y,z,qw,qx,qy,qz\n0,1,1,2,3,1,0,0\n";
  try {
    io::parse_sensor_log(bad, "log.csv");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(std::string(e.what()).find("log.csv:2") != std::string::npos);
  }
  CHECK(test::thrown_kind([] { io::parse_sensor_log("wrong,header\n"); }) == ErrorKind::Parse);
  CHECK(io::parse_sensor_log(io::format_sensor_log({})).empty());
}

TEST_CASE("annotation CSV round trip keeps NaN joints and status") {
  Rng rng(4);
  const HandShape shape = HandShape::default_shape();
  std::vector<io::AnnotationRow> rows;
  for (int i = 0; i < 20; ++i) {
    io::AnnotationRow r{i * 1000LL, forward_kinematics(shape, random_pose(rng)), "exact"};
    if (i == 3) {
      r.skeleton.at(1, Landmark::T) = Vec3::Constant(std::nan(""));
      r.status = "failed:2";
    }
    rows.push_back(r);
  }
  const std::string text = io::format_annotations(rows);
  const std::string header = text.substr(0, text.find('\n'));
  CHECK(header.rfind("timestamp_us,W_x,W_y,W_z,M1_x", 0) == 0);
  CHECK(header.substr(header.size() - 12) == ",T5_z,status");
  const auto back = io::parse_annotations(text);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].timestamp_us == rows[i].timestamp_us);
    CHECK(test::bit_equal(back[i].skeleton, rows[i].skeleton));
    CHECK(back[i].status == rows[i].status);
  }
  CHECK_FALSE(back[3].skeleton.has(joint(1, Landmark::T)));
}

TEST_CASE("small CSV formats round trip") {
  std::vector<Correspondence> c{{Vec3(1.5, -2, 3e-7), Vec2(320.25, 1.0 / 7.0)}, {Vec3(0, 0, 1), Vec2(0, 0)}};
  const auto c2 = io::parse_correspondences(io::format_correspondences(c));
  REQUIRE(c2.size() == 2);
  CHECK(c2[0].tracker_point == c[0].tracker_point);
  CHECK(c2[0].pixel == c[0].pixel);

  std::vector<TimedEvent> e{{0, 5}, {16667, 6}};
  const auto e2 = io::parse_events(io::format_events(e));
  REQUIRE(e2.size() == 2);
  CHECK(e2[1].timestamp_us == 16667);
  CHECK(e2[1].id == 6);

  const CaptureSchedule s = generate_schedule(7);
  const CaptureSchedule s2 = io::parse_schedule(io::format_schedule(s));
  REQUIRE(s2.segments.size() == s.segments.size());
  for (std::size_t i = 0; i < s.segments.size(); ++i) {
    CHECK(s2.segments[i].type == s.segments[i].type);
    CHECK(s2.segments[i].pose_a == s.segments[i].pose_a);
    CHECK(s2.segments[i].pose_b == s.segments[i].pose_b);
    CHECK(s2.segments[i].region == s.segments[i].region);
    CHECK(s2.segments[i].frames == s.segments[i].frames);
  }

  const std::string pairs = io::format_pairs({{1, 2, 3, true}});
  CHECK(pairs == "depth_id,sensor_id,gap_us,extrapolated\n1,2,3,1\n");
  const std::string curve = io::format_curve({{0.5, 1.0, 0.25}});
  CHECK(curve == "eps_mm,joints_within,frames_within\n0.5,1,0.25\n");
}
