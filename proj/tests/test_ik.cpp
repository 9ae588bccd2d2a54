#include <doctest.h>

#include "handann/ik.hpp"
#include "handann/kinematics.hpp"
#include "handann/sampling.hpp"
#include "support.hpp"

using namespace handann;

namespace {

SensorReading reading_from_axes(const Vec3& position, const Vec3& v1, const Vec3& v2) {
  Mat3 r;
  r << v1, v2, v1.cross(v2);
  return {1, position, Quat(r)};
}

// Brute-force oracle for the planar PIP: zooming grid search over the half
// plane y >= 0 (the side opposite T in the fixtures) for the point that
// minimises the squared residuals of both circle constraints.
Vec2 grid_pip(Vec2 m, Vec2 d, double b_mp, double b_pd) {
  const auto cost = [&](Vec2 p) {
    const double a = (p - m).norm() - b_mp, b = (p - d).norm() - b_pd;
    return a * a + b * b;
  };
  Vec2 best(0, 0);
  double lo_x = -100, hi_x = 100, lo_y = 0, hi_y = 100;
  for (int level = 0; level < 12; ++level) {
    double best_cost = 1e300;
    const int n = 200;
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        const Vec2 p(lo_x + (hi_x - lo_x) * i / n, lo_y + (hi_y - lo_y) * j / n);
        const double c = cost(p);
        if (c < best_cost) {
          best_cost = c;
          best = p;
        }
      }
    }
    const double wx = (hi_x - lo_x) / 20, wy = (hi_y - lo_y) / 20;
    lo_x = best.x() - wx, hi_x = best.x() + wx;
    lo_y = std::max(0.0, best.y() - wy), hi_y = best.y() + wy;
  }
  return best;
}

}  // namespace

TEST_CASE("tip_dip_from_nail closed form") {
  FingerShape fs{40, 25, 20, 6, 0.5};
  const SensorReading s = reading_from_axes(Vec3::Zero(), Vec3(1, 0, 0), Vec3(0, 0, -1));
  const TipDip td = tip_dip_from_nail(s, fs);
  CHECK((td.tip - Vec3(10, 0, -6)).norm() < 1e-12);
  CHECK((td.dip - Vec3(-10, 0, -6)).norm() < 1e-12);
  CHECK((td.tip - td.dip).norm() == doctest::Approx(20.0));

  fs.half_thickness = 0.0;
  const SensorReading t = reading_from_axes(Vec3(1, 2, 3), Vec3(0, 1, 0), Vec3(1, 0, 0));
  const TipDip on_line = tip_dip_from_nail(t, fs);
  CHECK((on_line.tip - Vec3(1, 12, 3)).norm() < 1e-12);
  CHECK((on_line.dip - Vec3(1, -8, 3)).norm() < 1e-12);
}

TEST_CASE("tip_dip_from_nail recovers FK tips and DIPs") {
  Rng rng(31);
  for (int i = 0; i < 500; ++i) {
    const HandShape shape = random_shape(rng);
    const Skeleton sk = forward_kinematics(shape, random_pose(rng));
    const SensorFrame fr = simulate_sensors(shape, sk, 0);
    for (int f = 0; f < kNumFingers; ++f) {
      const TipDip td = tip_dip_from_nail(fr.sensor(f + 1), shape.fingers[f]);
      CHECK((td.tip - sk.at(f, Landmark::T)).norm() < 1e-9);
      CHECK((td.dip - sk.at(f, Landmark::D)).norm() < 1e-9);
    }
  }
}

TEST_CASE("palm_from_s6") {
  HandShape shape = HandShape::default_shape();
  shape.s6_offset = RigidTransform::identity();

  SensorReading s6{6, Vec3::Zero(), Quat::Identity()};
  auto pts = palm_from_s6(s6, shape);
  for (int i = 0; i < 6; ++i) CHECK(pts[i] == shape.palm_points[i]);

  s6.position = Vec3(3, -4, 500);
  pts = palm_from_s6(s6, shape);
  for (int i = 0; i < 6; ++i) CHECK((pts[i] - shape.palm_points[i] - s6.position).norm() < 1e-12);

  s6.position = Vec3::Zero();
  s6.orientation = axis_angle(Vec3::UnitZ(), kPi / 2);
  pts = palm_from_s6(s6, shape);
  for (int i = 0; i < 6; ++i) {
    const Vec3& p = shape.palm_points[i];
    CHECK((pts[i] - Vec3(-p.y(), p.x(), p.z())).norm() < 1e-12);
  }

  s6.orientation = Quat(0.5, 0, 0, 0);
  CHECK(test::thrown_kind([&] { palm_from_s6(s6, shape); }) == ErrorKind::InvalidInput);
}

TEST_CASE("palm_from_s6 inverts the S6 simulation with a non-trivial offset") {
  const HandShape shape = HandShape::default_shape();
  HandPose pose;
  pose.global = {axis_angle(Vec3(0.3, -1, 2), 1.1), Vec3(-20, 40, 450)};
  const Skeleton sk = forward_kinematics(shape, pose);
  const auto pts = palm_from_s6(simulate_sensors(shape, sk, 0).sensor(kPalmSensor), shape);
  CHECK((pts[0] - sk[JointId::W]).norm() < 1e-9);
  for (int f = 0; f < kNumFingers; ++f) CHECK((pts[f + 1] - sk.at(f, Landmark::M)).norm() < 1e-9);
}

TEST_CASE("solve_pip worked example, cross-checked by brute force") {
  const Vec3 m(0, 0, 0), d(60, 0, 0);
  const PipSolution s = solve_pip(m, d, Vec3(75, -8, 0), 45, 25);
  REQUIRE(s.outcome == PipOutcome::Exact);
  CHECK(s.position.x() == doctest::Approx(5000.0 / 120.0).epsilon(1e-12));
  CHECK(s.position.y() == doctest::Approx(std::sqrt(2025.0 - std::pow(5000.0 / 120.0, 2))).epsilon(1e-12));
  CHECK(std::abs(s.position.z()) < 1e-12);
  CHECK((s.position - Vec3(41.6667, 16.9967, 0)).norm() < 1e-3);

  const Vec2 oracle = grid_pip(Vec2(0, 0), Vec2(60, 0), 45, 25);
  CHECK((Vec2(s.position.x(), s.position.y()) - oracle).norm() < 1e-6);

  const PipSolution mirrored = solve_pip(m, d, Vec3(75, 8, 0), 45, 25);
  CHECK((mirrored.position - Vec3(s.position.x(), -s.position.y(), 0)).norm() < 1e-12);
}

TEST_CASE("solve_pip tangency and feasibility projection") {
  const PipSolution tangent = solve_pip(Vec3::Zero(), Vec3(70, 0, 0), Vec3(90, 0, 0), 45, 25);
  CHECK(tangent.outcome == PipOutcome::Exact);
  CHECK((tangent.position - Vec3(45, 0, 0)).norm() < 1e-9);

  const PipSolution projected = solve_pip(Vec3::Zero(), Vec3(71.5, 0, 0), Vec3(90, 0, 0), 45, 25);
  CHECK(projected.outcome == PipOutcome::Projected);
  CHECK((projected.position - Vec3(45, 0, 0)).norm() < 1e-12);
  CHECK(projected.residual == doctest::Approx(1.5));

  const PipSolution failed = solve_pip(Vec3::Zero(), Vec3(72.5, 0, 0), Vec3(90, 0, 0), 45, 25);
  CHECK(failed.outcome == PipOutcome::Failed);
  CHECK_FALSE(failed.position.allFinite());

  IkOptions wide;
  wide.feasibility_tau = 3.0;
  CHECK(solve_pip(Vec3::Zero(), Vec3(72.5, 0, 0), Vec3(90, 0, 0), 45, 25, wide).outcome == PipOutcome::Projected);

  // Too short: |MD| below |b_mp - b_pd| by 5 mm.
  CHECK(solve_pip(Vec3::Zero(), Vec3(15, 0, 0), Vec3(10, 5, 0), 45, 25).outcome == PipOutcome::Failed);
}

TEST_CASE("solve_pip satisfies both circles and the strict side constraint") {
  Rng rng(77);
  std::uniform_real_distribution<double> u(-1, 1);
  int checked = 0;
  while (checked < 2000) {
    const double b1 = 30 + 20 * (u(rng) + 1), b2 = 20 + 10 * (u(rng) + 1);
    const double span = std::abs(b1 - b2) + (b1 + b2 - std::abs(b1 - b2)) * 0.5 * (u(rng) + 1);
    const Vec3 m = Vec3(u(rng), u(rng), u(rng)) * 100;
    const Vec3 axis = Vec3(u(rng), u(rng), u(rng)).normalized();
    const Vec3 d = m + span * axis;
    const Vec3 t = d + Vec3(u(rng), u(rng), u(rng)) * 30;
    const Vec3 perp_t = (t - m) - (t - m).dot(axis) * axis;
    if (perp_t.norm() < 1e-3) continue;
    const PipSolution s = solve_pip(m, d, t, b1, b2);
    REQUIRE(s.outcome == PipOutcome::Exact);
    CHECK(std::abs((s.position - m).norm() - b1) < 1e-6);
    CHECK(std::abs((s.position - d).norm() - b2) < 1e-6);
    const Vec3 perp_p = (s.position - m) - (s.position - m).dot(axis) * axis;
    CHECK(perp_p.dot(perp_t) < 0.0);
    const Vec3 n = (d - m).cross(t - m).normalized();
    CHECK(std::abs((s.position - m).dot(n)) < 1e-9);
    ++checked;
  }
}

TEST_CASE("solve_pip side tie falls back to the hints") {
  const Vec3 m(0, 0, 0), d(60, 0, 0), t(80, 0, 0);
  PipHint hint;
  CHECK(solve_pip(m, d, t, 45, 25, {}, hint).outcome == PipOutcome::Failed);
  hint.plane_normal = Vec3(0, 0, 1);
  hint.dorsal = Vec3(0, 1, 0);
  const PipSolution a = solve_pip(m, d, t, 45, 25, {}, hint);
  CHECK(a.side_tie);
  CHECK(a.position.y() > 0);
  hint.dorsal = Vec3(0, -1, 0);
  CHECK(solve_pip(m, d, t, 45, 25, {}, hint).position.y() < 0);
  hint.previous = Vec3(40, 15, 0);
  CHECK(solve_pip(m, d, t, 45, 25, {}, hint).position.y() > 0);
}

TEST_CASE("annotate_frame round trip on random poses") {
  Rng rng(101);
  for (int i = 0; i < 2000; ++i) {
    const HandShape shape = random_shape(rng);
    const Skeleton sk = forward_kinematics(shape, random_pose(rng));
    const AnnotationResult r = annotate_frame(simulate_sensors(shape, sk, 0), shape);
    CHECK(r.status == AnnotationStatus::Exact);
    CHECK(status_code(r) == "exact");
    CHECK(test::max_joint_error(r.skeleton, sk) < 1e-6);
    for (const auto& d : r.fingers) CHECK(d.residual < 1e-6);
  }
}

TEST_CASE("annotate_frame is rigidly equivariant") {
  Rng rng(12);
  const HandShape shape = HandShape::default_shape();
  for (int i = 0; i < 300; ++i) {
    const SensorFrame fr = simulate_sensors(shape, forward_kinematics(shape, random_pose(rng)), 0);
    const RigidTransform g{random_rotation(rng), Vec3::Random() * 300};
    SensorFrame moved = fr;
    for (auto& s : moved.readings) {
      s.position = g.apply(s.position);
      s.orientation = (g.rotation * s.orientation).normalized();
    }
    const Skeleton a = annotate_frame(fr, shape).skeleton;
    const Skeleton b = annotate_frame(moved, shape).skeleton;
    CHECK(test::max_joint_error(b, test::transformed(a, g)) < 1e-9);
  }
}

TEST_CASE("annotate_frame degrades per finger") {
  Rng rng(55);
  const HandShape shape = HandShape::default_shape();
  for (int trial = 0; trial < 50; ++trial) {
    const Skeleton sk = forward_kinematics(shape, random_pose(rng));
    const SensorFrame fr = simulate_sensors(shape, sk, 0);
    const int bad = trial % kNumFingers;
    SensorFrame corrupt = fr;
    // Pull the nail sensor far from the palm: the M-D span exceeds the
    // proximal+middle length by far more than the tolerance.
    SensorReading& s = corrupt.sensor(bad + 1);
    s.position += 200.0 * (s.position - sk.at(bad, Landmark::M)).normalized();
    const AnnotationResult r = annotate_frame(corrupt, shape);
    CHECK(r.status == AnnotationStatus::Failed);
    CHECK(r.failed_mask == (1u << bad));
    CHECK(status_code(r) == "failed:" + std::to_string(bad + 1));
    int produced = 0;
    for (int j = 0; j < kNumJoints; ++j) {
      const auto id = static_cast<JointId>(j);
      const bool in_bad = j >= 1 + 4 * bad + 1 && j <= 1 + 4 * bad + 3;
      CHECK(r.skeleton.has(id) == !in_bad);
      if (!in_bad) {
        ++produced;
        CHECK((r.skeleton.positions[j] - sk.positions[j]).norm() < 1e-6);
      }
    }
    CHECK(produced == 18);

    // A small perturbation changes only that finger's P, D, T.
    SensorFrame nudged = fr;
    nudged.sensor(bad + 1).position += Vec3(0.3, -0.2, 0.1);
    const AnnotationResult n = annotate_frame(nudged, shape, {1e9, 1e-6});
    for (int j = 0; j < kNumJoints; ++j) {
      const bool in_bad = j >= 1 + 4 * bad + 1 && j <= 1 + 4 * bad + 3;
      if (!in_bad) CHECK(n.skeleton.positions[j] == annotate_frame(fr, shape).skeleton.positions[j]);
    }
  }
}

TEST_CASE("annotate_frame rejects a frame with S2 missing") {
  const HandShape shape = HandShape::default_shape();
  SensorFrame fr = simulate_sensors(shape, forward_kinematics(shape, HandPose::rest()), 0);
  fr.sensor(2) = SensorReading{};
  CHECK(test::thrown_kind([&] { annotate_frame(fr, shape); }) == ErrorKind::MalformedFrame);
}

TEST_CASE("extract_angles") {
  const HandShape shape = HandShape::default_shape();
  const HandPose rest = extract_angles(forward_kinematics(shape, HandPose::rest()), shape);
  CHECK(rotation_distance(rest.global.rotation, Quat::Identity()) < 1e-9);
  CHECK(rest.global.translation.norm() < 1e-9);
  for (const auto& f : rest.fingers) {
    CHECK(std::abs(f.mcp_twist) + std::abs(f.mcp_flexion) + std::abs(f.mcp_abduction) + std::abs(f.pip_flexion) +
              std::abs(f.dip_flexion) <
          1e-9);
  }

  Rng rng(202);
  for (int i = 0; i < 1000; ++i) {
    const HandShape s = random_shape(rng);
    const HandPose p = random_pose(rng);
    const Skeleton sk = forward_kinematics(s, p);
    const HandPose q = extract_angles(sk, s);
    CHECK(rotation_distance(q.global.rotation, p.global.rotation) < 1e-6);
    CHECK((q.global.translation - p.global.translation).norm() < 1e-6);
    for (int f = 0; f < kNumFingers; ++f) {
      const FingerPose& a = p.fingers[f];
      const FingerPose& b = q.fingers[f];
      CHECK(std::abs(wrap_angle(a.mcp_twist - b.mcp_twist)) < 1e-6);
      CHECK(std::abs(wrap_angle(a.mcp_flexion - b.mcp_flexion)) < 1e-6);
      CHECK(std::abs(wrap_angle(a.mcp_abduction - b.mcp_abduction)) < 1e-6);
      CHECK(std::abs(wrap_angle(a.pip_flexion - b.pip_flexion)) < 1e-6);
      CHECK(std::abs(wrap_angle(a.dip_flexion - b.dip_flexion)) < 1e-6);
    }
    CHECK(test::max_joint_error(forward_kinematics(s, q), sk) < 1e-6);
  }

  Skeleton off = forward_kinematics(shape, HandPose::rest());
  HandPose bent;
  bent.fingers[2].pip_flexion = 0.8;
  off = forward_kinematics(shape, bent);
  const Vec3 n = (off.at(2, Landmark::P) - off.at(2, Landmark::M))
                     .cross(off.at(2, Landmark::D) - off.at(2, Landmark::M))
                     .normalized();
  off.at(2, Landmark::T) += 5.0 * n;
  CHECK(test::thrown_kind([&] { extract_angles(off, shape); }) == ErrorKind::InvalidInput);
}
