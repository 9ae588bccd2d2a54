#include "handann/cli.hpp"

#include <cmath>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "handann/batch.hpp"
#include "handann/calibration.hpp"
#include "handann/io.hpp"
#include "handann/metrics.hpp"
#include "handann/protocol.hpp"
#include "handann/session.hpp"
#include "handann/sync.hpp"

namespace handann {

namespace {

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw Error(ErrorKind::Usage, fmt::format("bad number '{}'", s));
  return v;
}

std::vector<JointId> parse_subset(const std::string& spec) {
  if (spec == "all") return all_joints();
  std::vector<JointId> out;
  for (const auto& name : split_list(spec, ',')) {
    const auto id = parse_joint(name);
    if (!id) throw Error(ErrorKind::Usage, fmt::format("unknown joint '{}'", name));
    out.push_back(*id);
  }
  if (out.empty()) throw Error(ErrorKind::Usage, "empty joint subset");
  return out;
}

struct SimulateArgs {
  std::string config, shape, out_sensors, out_gt, out_shape;
  std::optional<std::int64_t> frames, frames_per_transition;
  std::optional<std::uint64_t> seed;
  std::optional<double> noise_pos, noise_rot;
};

int run_simulate(const SimulateArgs& a, std::ostream& out) {
  RunConfig cfg = a.config.empty() ? RunConfig{} : read_run_config(a.config);
  if (!a.shape.empty()) cfg.shape_path = a.shape;
  if (a.frames) cfg.frames = *a.frames;
  if (a.frames_per_transition) cfg.frames_per_transition = *a.frames_per_transition;
  if (a.seed) cfg.seed = *a.seed;
  if (a.noise_pos) cfg.sigma_pos_mm = *a.noise_pos;
  if (a.noise_rot) cfg.sigma_rot_deg = *a.noise_rot;
  const HandShape shape = cfg.shape_path ? io::read_shape(*cfg.shape_path) : HandShape::default_shape();
  const SyntheticSession s = generate_synthetic_session(cfg, shape);
  io::write_file(a.out_sensors, io::format_sensor_log(s.sensors));
  io::write_file(a.out_gt, io::format_annotations(s.truth));
  if (!a.out_shape.empty()) io::write_file(a.out_shape, io::format_shape(shape));
  out << fmt::format("simulated {} frames (seed {}, noise {} mm / {} deg)\n", s.sensors.size(), cfg.seed,
                     cfg.sigma_pos_mm, cfg.sigma_rot_deg);
  return 0;
}

int run_annotate(const std::string& shape_path, const std::string& sensors, const std::string& out_path,
                 const IkOptions& opts, bool serial, std::ostream& out) {
  const HandShape shape = io::read_shape(shape_path);
  const auto frames = io::parse_sensor_log(io::read_file(sensors), sensors);
  const auto results = serial ? annotate_frames_serial(frames, shape, opts) : annotate_frames_parallel(frames, shape, opts);
  std::vector<io::AnnotationRow> rows;
  rows.reserve(results.size());
  std::map<std::string, std::int64_t> counts;
  for (std::size_t i = 0; i < results.size(); ++i) {
    rows.push_back({frames[i].timestamp_us, results[i].skeleton, status_code(results[i])});
    ++counts[results[i].status == AnnotationStatus::Failed ? "failed" : rows.back().status];
  }
  io::write_file(out_path, io::format_annotations(rows));
  out << fmt::format("annotated {} frames: {} exact, {} projected, {} failed\n", rows.size(), counts["exact"],
                     counts["projected"], counts["failed"]);
  return 0;
}

int run_calibrate(const std::string& intrinsics, const std::string& corrs_path, const std::string& out_path,
                  std::ostream& out) {
  const CameraIntrinsics k = io::read_intrinsics(intrinsics);
  const auto corrs = io::parse_correspondences(io::read_file(corrs_path), corrs_path);
  const PnpResult r = solve_pnp(corrs, k);
  io::write_file(out_path, io::format_transform(r.tracker_to_camera));
  out << fmt::format("calibrated from {} correspondences: rms {:.6g} px after {} iterations\n", corrs.size(),
                     r.rms_px, r.iterations);
  return 0;
}

int run_sync(const std::string& depth_path, const std::string& sensor_path, const std::string& out_path,
             std::ostream& out) {
  const auto depth = io::parse_events(io::read_file(depth_path), depth_path);
  const auto sensors = io::parse_events(io::read_file(sensor_path), sensor_path);
  const auto pairs = align(depth, sensors);
  io::write_file(out_path, io::format_pairs(pairs));
  std::int64_t extrapolated = 0;
  for (const auto& p : pairs) extrapolated += p.extrapolated;
  if (pairs.empty()) {
    out << "paired 0 depth frames\n";
    return 0;
  }
  const GapStats st = gap_stats(pairs);
  out << fmt::format("paired {} depth frames: max gap {} us, mean gap {:.3f} us, {} extrapolated\n", pairs.size(),
                     st.max_us, st.mean_us, extrapolated);
  return 0;
}

int run_protocol(std::int64_t frames_per_transition, const std::string& out_path, std::ostream& out) {
  const CaptureSchedule s = generate_schedule(frames_per_transition);
  io::write_file(out_path, io::format_schedule(s));
  std::int64_t total = 0;
  for (const auto& seg : s.segments) total += seg.frames;
  out << fmt::format("schedule: {} segments, {} frames\n", s.segments.size(), total);
  return 0;
}

int run_evaluate(const std::string& gt_path, const std::string& est_path, const std::string& subset_spec,
                 const std::string& grid_spec, const std::string& out_path, std::ostream& out) {
  const auto gt = io::parse_annotations(io::read_file(gt_path), gt_path);
  const auto est = io::parse_annotations(io::read_file(est_path), est_path);
  const auto subset = parse_subset(subset_spec);
  const auto grid = parse_eps_grid(grid_spec);
  std::map<std::int64_t, const io::AnnotationRow*> by_ts;
  for (const auto& row : est) by_ts[row.timestamp_us] = &row;
  std::vector<Skeleton> gts, ests;
  gts.reserve(gt.size());
  ests.reserve(gt.size());
  for (const auto& row : gt) {
    const auto it = by_ts.find(row.timestamp_us);
    if (it == by_ts.end()) {
      throw Error(ErrorKind::InvalidInput, fmt::format("estimate has no frame at t={} us", row.timestamp_us));
    }
    gts.push_back(row.skeleton);
    ests.push_back(it->second->skeleton);
  }
  const auto records = error_records(ests, gts, subset);
  const auto curve = curve_export(records, grid);
  io::write_file(out_path, io::format_curve(curve));
  out << fmt::format("evaluated {} frames x {} joints: mean error {} mm\n", records.size(), subset.size(),
                     io::format_double(mean_error(records)));
  for (const auto& row : curve) {
    out << fmt::format("eps {} mm: joints_within {} frames_within {}\n", io::format_double(row.eps),
                       io::format_double(row.joints), io::format_double(row.frames));
  }
  return 0;
}

}  // namespace

std::vector<double> parse_eps_grid(const std::string& spec) {
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    const auto parts = split_list(spec, ':');
    if (parts.size() != 3) throw Error(ErrorKind::Usage, "eps grid range must be start:step:stop");
    const double start = parse_number(parts[0]), step = parse_number(parts[1]), stop = parse_number(parts[2]);
    if (!(step > 0) || stop < start) throw Error(ErrorKind::Usage, "eps grid range needs step > 0 and stop >= start");
    const auto n = static_cast<std::int64_t>(std::floor((stop - start) / step + 1e-9));
    for (std::int64_t i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
  } else {
    for (const auto& s : split_list(spec, ',')) out.push_back(parse_number(s));
  }
  if (out.empty()) throw Error(ErrorKind::Usage, "empty eps grid");
  return out;
}

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Six-sensor hand pose annotation toolkit", "handann"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic sensor log and its ground truth");
  simulate->add_option("--config", sim.config, "Run config file (key = value)");
  simulate->add_option("--shape", sim.shape, "Hand shape file (default: built-in shape)");
  simulate->add_option("--frames", sim.frames, "Number of frames");
  simulate->add_option("--frames-per-transition", sim.frames_per_transition, "Frames per extremal-pair transition");
  simulate->add_option("--seed", sim.seed, "Session seed");
  simulate->add_option("--noise-pos", sim.noise_pos, "Sensor position noise sigma per axis, mm");
  simulate->add_option("--noise-rot", sim.noise_rot, "Sensor rotation noise sigma per axis, degrees");
  simulate->add_option("--out-sensors", sim.out_sensors, "Sensor log CSV to write")->required();
  simulate->add_option("--out-gt", sim.out_gt, "Ground-truth annotation CSV to write")->required();
  simulate->add_option("--out-shape", sim.out_shape, "Write the hand shape used");

  std::string shape, sensors, out_path;
  IkOptions ik;
  bool serial = false;
  auto* annotate = app.add_subcommand("annotate", "Recover 21 joints per frame from a sensor log");
  annotate->add_option("--shape", shape, "Hand shape file")->required();
  annotate->add_option("--sensors", sensors, "Sensor log CSV")->required();
  annotate->add_option("--out", out_path, "Annotation CSV to write")->required();
  annotate->add_option("--tau", ik.feasibility_tau, "Feasibility projection tolerance, mm")->capture_default_str();
  annotate->add_option("--tau-res", ik.residual_tau, "Residual bound for exact status, mm")->capture_default_str();
  annotate->add_flag("--serial", serial, "Use the single-threaded reference loop");

  std::string intrinsics, corrs;
  auto* calibrate = app.add_subcommand("calibrate", "Estimate the tracker-to-camera transform (PnP)");
  calibrate->add_option("--intrinsics", intrinsics, "Intrinsics file")->required();
  calibrate->add_option("--corrs", corrs, "Correspondence CSV (x,y,z,u,v)")->required();
  calibrate->add_option("--out", out_path, "Transform file to write")->required();

  std::string depth;
  auto* sync = app.add_subcommand("sync", "Pair depth frames with nearest sensor samples");
  sync->add_option("--depth", depth, "Depth timestamps CSV (timestamp_us,id)")->required();
  sync->add_option("--sensors", sensors, "Sensor timestamps CSV (timestamp_us,id)")->required();
  sync->add_option("--out", out_path, "Pairs CSV to write")->required();

  std::int64_t fpt = kDefaultFramesPerTransition;
  auto* protocol = app.add_subcommand("protocol", "Write the capture schedule");
  protocol->add_option("--frames-per-transition", fpt, "Frames per extremal-pair transition")->capture_default_str();
  protocol->add_option("--out", out_path, "Schedule CSV to write")->required();

  std::string gt, est, subset = "all", grid = "0:1:50";
  auto* evaluate = app.add_subcommand("evaluate", "Joint-error curves of an annotation against ground truth");
  evaluate->add_option("--gt", gt, "Ground-truth annotation CSV")->required();
  evaluate->add_option("--est", est, "Estimated annotation CSV")->required();
  evaluate->add_option("--subset", subset, "Joint names, comma separated, or 'all'")->capture_default_str();
  evaluate->add_option("--eps-grid", grid, "start:step:stop or comma list, mm")->capture_default_str();
  evaluate->add_option("--out", out_path, "Curve CSV to write")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    if (e.get_exit_code() != 0) err << app.help();
    return 2;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim, out);
    if (annotate->parsed()) return run_annotate(shape, sensors, out_path, ik, serial, out);
    if (calibrate->parsed()) return run_calibrate(intrinsics, corrs, out_path, out);
    if (sync->parsed()) return run_sync(depth, sensors, out_path, out);
    if (protocol->parsed()) return run_protocol(fpt, out_path, out);
    if (evaluate->parsed()) return run_evaluate(gt, est, subset, grid, out_path, out);
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return e.kind() == ErrorKind::Usage ? 2 : 1;
  }
  err << app.help();
  return 2;
}

}  // namespace handann
