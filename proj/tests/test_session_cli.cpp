#include <filesystem>
#include <sstream>

#include <doctest.h>

#include "handann/cli.hpp"
#include "handann/io.hpp"
#include "handann/session.hpp"
#include "support.hpp"

using namespace handann;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "handann_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli_dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("run config parsing and validation") {
  const RunConfig c = parse_run_config(io::parse_key_values("seed = 9\nframes = 12\nsigma_pos_mm = 0.5\n"));
  CHECK(c.seed == 9);
  CHECK(c.frames == 12);
  CHECK(c.sigma_pos_mm == 0.5);
  CHECK(test::thrown_kind([] { parse_run_config(io::parse_key_values("sede = 1\n")); }) == ErrorKind::Parse);
  CHECK(test::thrown_kind([] { parse_run_config(io::parse_key_values("frames = lots\n")); }) == ErrorKind::Parse);

  RunConfig bad;
  bad.frames = -1;
  bad.tau_res = 0;
  try {
    bad.validate();
    FAIL("expected rejection");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("frames") != std::string::npos);
    CHECK(msg.find("tau_res") != std::string::npos);
  }

  const fs::path dir = scratch("config");
  io::write_file(dir / "run.cfg", "shape = hand.cfg\nframes = 3\n");
  const RunConfig r = read_run_config(dir / "run.cfg");
  CHECK(*r.shape_path == dir / "hand.cfg");
}

TEST_CASE("synthetic sessions are deterministic and exact") {
  RunConfig cfg;
  cfg.frames = 100;
  cfg.seed = 77;
  const HandShape shape = HandShape::default_shape();
  const SyntheticSession a = generate_synthetic_session(cfg, shape);
  const SyntheticSession b = generate_synthetic_session(cfg, shape);
  REQUIRE(a.sensors.size() == 100);
  REQUIRE(a.truth.size() == 100);
  CHECK(io::format_sensor_log(a.sensors) == io::format_sensor_log(b.sensors));
  CHECK(io::format_annotations(a.truth) == io::format_annotations(b.truth));
  for (std::size_t i = 0; i < a.truth.size(); ++i) {
    CHECK(a.truth[i].timestamp_us == a.sensors[i].timestamp_us);
    CHECK(test::max_joint_error(a.truth[i].skeleton, forward_kinematics(shape, a.poses[i])) == 0.0);
  }
  CHECK(a.sensors[1].timestamp_us == 1389);

  cfg.seed = 78;
  CHECK(io::format_sensor_log(generate_synthetic_session(cfg, shape).sensors) != io::format_sensor_log(a.sensors));

  cfg.frames = 0;
  const SyntheticSession empty = generate_synthetic_session(cfg, shape);
  CHECK(empty.sensors.empty());
  CHECK(io::format_sensor_log(empty.sensors) == "timestamp_us,sensor_id,x,y,z,qw,qx,qy,qz\n");
}

TEST_CASE("cli: usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"protocol", "--bogus", "1", "--out", "x"}).code == 2);
  CHECK(run({"annotate", "--shape", "a"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("cli: missing shape file exits 1 with a parsable error line") {
  const Run r = run({"annotate", "--shape", "/nonexistent/shape.cfg", "--sensors", "x.csv", "--out", "y.csv"});
  CHECK(r.code == 1);
  CHECK(r.err.rfind("error: file-not-found: ", 0) == 0);
}

TEST_CASE("cli: simulate -> annotate -> evaluate reproduces ground truth") {
  const fs::path d = scratch("pipeline");
  const auto p = [&](const char* f) { return (d / f).string(); };
  io::write_file(d / "run.cfg", "seed = 5\nframes = 100\nframes_per_transition = 20\n");
  REQUIRE(run({"simulate", "--config", p("run.cfg"), "--out-sensors", p("sensors.csv"), "--out-gt", p("gt.csv"),
               "--out-shape", p("shape.cfg")})
              .code == 0);
  const Run ann = run({"annotate", "--shape", p("shape.cfg"), "--sensors", p("sensors.csv"), "--out", p("est.csv")});
  REQUIRE(ann.code == 0);
  CHECK(ann.out.find("100 exact") != std::string::npos);

  const auto gt = io::parse_annotations(io::read_file(d / "gt.csv"));
  const auto est = io::parse_annotations(io::read_file(d / "est.csv"));
  REQUIRE(gt.size() == 100);
  REQUIRE(est.size() == 100);
  for (std::size_t i = 0; i < gt.size(); ++i) {
    CHECK(est[i].timestamp_us == gt[i].timestamp_us);
    CHECK(test::max_joint_error(est[i].skeleton, gt[i].skeleton) < 1e-6);
    CHECK(est[i].status == "exact");
  }

  REQUIRE(run({"evaluate", "--gt", p("gt.csv"), "--est", p("est.csv"), "--eps-grid", "0.001", "--out", p("curve.csv")})
              .code == 0);
  CHECK(io::read_file(d / "curve.csv") == "eps_mm,joints_within,frames_within\n0.001,1,1\n");

  // Bit-reproducible across runs.
  REQUIRE(run({"simulate", "--config", p("run.cfg"), "--out-sensors", p("sensors2.csv"), "--out-gt", p("gt2.csv")})
              .code == 0);
  CHECK(io::read_file(d / "sensors2.csv") == io::read_file(d / "sensors.csv"));
  CHECK(io::read_file(d / "gt2.csv") == io::read_file(d / "gt.csv"));
}

TEST_CASE("cli: calibrate, sync and protocol") {
  const fs::path d = scratch("modules");
  const auto p = [&](const char* f) { return (d / f).string(); };
  const CameraIntrinsics k;
  io::write_file(d / "k.cfg", io::format_intrinsics(k));
  const RigidTransform truth{axis_angle(Vec3(0.2, 1, 0.1), 0.5), Vec3(30, -10, 450)};
  std::vector<Correspondence> corrs;
  for (int i = 0; i < 12; ++i) {
    const Vec3 x(40.0 * (i % 4) - 60, 35.0 * (i / 4) - 35, 20.0 * ((i * 7) % 5) - 40);
    corrs.push_back({x, project(truth.apply(x), k)});
  }
  io::write_file(d / "corrs.csv", io::format_correspondences(corrs));
  REQUIRE(run({"calibrate", "--intrinsics", p("k.cfg"), "--corrs", p("corrs.csv"), "--out", p("x.cfg")}).code == 0);
  const RigidTransform got = io::parse_transform(io::read_file(d / "x.cfg"));
  CHECK(rotation_distance(got.rotation, truth.rotation) < 1e-6);
  CHECK((got.translation - truth.translation).norm() < 1e-3);

  io::write_file(d / "depth.csv", io::format_events({{0, 0}, {16667, 1}}));
  std::vector<TimedEvent> sens;
  for (std::int64_t i = 0; i < 20; ++i) sens.push_back({1389 * i, i});
  io::write_file(d / "sens.csv", io::format_events(sens));
  REQUIRE(run({"sync", "--depth", p("depth.csv"), "--sensors", p("sens.csv"), "--out", p("pairs.csv")}).code == 0);
  CHECK(io::read_file(d / "pairs.csv") == "depth_id,sensor_id,gap_us,extrapolated\n0,0,0,0\n1,12,1,0\n");

  REQUIRE(run({"protocol", "--frames-per-transition", "10", "--out", p("sched.csv")}).code == 0);
  CHECK(io::parse_schedule(io::read_file(d / "sched.csv")).segments.size() == 544);

  io::write_file(d / "unsorted.csv", "timestamp_us,id\n5,0\n1,1\n");
  const Run uns = run({"sync", "--depth", p("unsorted.csv"), "--sensors", p("sens.csv"), "--out", p("x.csv")});
  CHECK(uns.code == 1);
  CHECK(uns.err.rfind("error: unsorted: ", 0) == 0);
}

TEST_CASE("eps grid parsing") {
  CHECK(parse_eps_grid("0:5:20") == std::vector<double>{0, 5, 10, 15, 20});
  CHECK(parse_eps_grid("1,2.5") == std::vector<double>{1, 2.5});
  CHECK(test::thrown_kind([] { parse_eps_grid("1:0:3"); }) == ErrorKind::Usage);
  CHECK(test::thrown_kind([] { parse_eps_grid("a,b"); }) == ErrorKind::Usage);
}
