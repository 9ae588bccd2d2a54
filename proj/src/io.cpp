#include "handann/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

#include <fmt/format.h>

#include "handann/errors.hpp"

namespace handann::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

[[noreturn]] void parse_error(const std::string& source, std::size_t line, const std::string& what) {
  throw Error(ErrorKind::Parse, fmt::format("{}:{}: {}", source, line, what));
}

double to_double(std::string_view t, const std::string& source, std::size_t line) {
  double v = 0.0;
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (ec != std::errc() || ptr != end) parse_error(source, line, fmt::format("bad number '{}'", t));
  return v;
}

std::int64_t to_int(std::string_view t, const std::string& source, std::size_t line) {
  std::int64_t v = 0;
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (ec != std::errc() || ptr != end) parse_error(source, line, fmt::format("bad integer '{}'", t));
  return v;
}

// Data rows of a CSV with a required header; blank lines skipped.
struct CsvRow {
  std::size_t line;
  std::vector<std::string_view> cells;
};

std::vector<CsvRow> csv_rows(std::string_view text, std::string_view header, const std::string& source,
                             std::size_t columns) {
  std::vector<CsvRow> rows;
  std::size_t line_no = 0;
  bool seen_header = false;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    const std::string_view line = trim(text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start));
    ++line_no;
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    if (line.empty()) continue;
    if (!seen_header) {
      if (line != header) parse_error(source, line_no, fmt::format("expected header '{}'", header));
      seen_header = true;
      continue;
    }
    auto cells = split(line, ',');
    if (cells.size() != columns) {
      parse_error(source, line_no, fmt::format("expected {} columns, got {}", columns, cells.size()));
    }
    rows.push_back({line_no, std::move(cells)});
  }
  if (!seen_header) parse_error(source, line_no, "missing header row");
  return rows;
}

std::vector<double> numbers(const KeyValues& kv, const std::string& key, std::size_t count, const std::string& source) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw Error(ErrorKind::Parse, fmt::format("{}: missing key '{}'", source, key));
  std::vector<double> out;
  for (auto t : tokens(it->second)) out.push_back(to_double(t, source, 0));
  if (out.size() != count) {
    throw Error(ErrorKind::Parse, fmt::format("{}: key '{}' needs {} values, got {}", source, key, count, out.size()));
  }
  return out;
}

Vec3 vec3(const KeyValues& kv, const std::string& key, const std::string& source) {
  const auto v = numbers(kv, key, 3, source);
  return {v[0], v[1], v[2]};
}

Quat quat(const KeyValues& kv, const std::string& key, const std::string& source) {
  const auto v = numbers(kv, key, 4, source);
  return Quat(v[0], v[1], v[2], v[3]);
}

std::string fmt_vec(const Vec3& v) {
  return format_double(v.x()) + " " + format_double(v.y()) + " " + format_double(v.z());
}

std::string fmt_quat(const Quat& q) {
  return format_double(q.w()) + " " + format_double(q.x()) + " " + format_double(q.y()) + " " + format_double(q.z());
}

std::string annotation_header() {
  std::string h = "timestamp_us";
  for (int i = 0; i < kNumJoints; ++i) {
    const auto name = joint_name(static_cast<JointId>(i));
    for (const char* axis : {"_x", "_y", "_z"}) h += fmt::format(",{}{}", name, axis);
  }
  return h + ",status";
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  return fmt::format("{}", v);
}

KeyValues parse_key_values(const std::string& text, const std::string& source) {
  KeyValues kv;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) parse_error(source, line_no, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) parse_error(source, line_no, "empty key");
    kv[std::string(key)] = std::string(trim(line.substr(eq + 1)));
  }
  return kv;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::FileNotFound, fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::FileNotFound, fmt::format("cannot write '{}'", path.string()));
  out << text;
  if (!out) throw Error(ErrorKind::FileNotFound, fmt::format("write to '{}' failed", path.string()));
}

KeyValues read_key_values(const std::filesystem::path& path) { return parse_key_values(read_file(path), path.string()); }

std::string format_shape(const HandShape& s) {
  std::string out = "# hand shape, mm, palm-local frame\n";
  out += "palm.W = " + fmt_vec(s.palm_points[0]) + "\n";
  for (int f = 0; f < kNumFingers; ++f) out += fmt::format("palm.M{} = {}\n", f + 1, fmt_vec(s.mcp(f)));
  for (int f = 0; f < kNumFingers; ++f) {
    const FingerShape& fs = s.fingers[static_cast<std::size_t>(f)];
    out += fmt::format("finger.{}.bones = {} {} {}\n", f + 1, format_double(fs.proximal), format_double(fs.middle),
                       format_double(fs.distal));
    out += fmt::format("finger.{}.half_thickness = {}\n", f + 1, format_double(fs.half_thickness));
    out += fmt::format("finger.{}.nail_fraction = {}\n", f + 1, format_double(fs.nail_fraction));
  }
  out += "s6_offset.rotation = " + fmt_quat(s.s6_offset.rotation) + "\n";
  out += "s6_offset.translation = " + fmt_vec(s.s6_offset.translation) + "\n";
  return out;
}

HandShape parse_shape(const std::string& text, const std::string& source) {
  const KeyValues kv = parse_key_values(text, source);
  HandShape s;
  s.palm_points[0] = vec3(kv, "palm.W", source);
  for (int f = 0; f < kNumFingers; ++f) {
    s.palm_points[static_cast<std::size_t>(f + 1)] = vec3(kv, fmt::format("palm.M{}", f + 1), source);
    FingerShape& fs = s.fingers[static_cast<std::size_t>(f)];
    const auto bones = numbers(kv, fmt::format("finger.{}.bones", f + 1), 3, source);
    fs.proximal = bones[0];
    fs.middle = bones[1];
    fs.distal = bones[2];
    fs.half_thickness = numbers(kv, fmt::format("finger.{}.half_thickness", f + 1), 1, source)[0];
    fs.nail_fraction = numbers(kv, fmt::format("finger.{}.nail_fraction", f + 1), 1, source)[0];
  }
  s.s6_offset.rotation = quat(kv, "s6_offset.rotation", source);
  s.s6_offset.translation = vec3(kv, "s6_offset.translation", source);
  if (auto r = validate_shape(s); !r) {
    throw Error(ErrorKind::InvalidInput, fmt::format("{}: {}", source, r.violations.front()));
  }
  return s;
}

HandShape read_shape(const std::filesystem::path& path) { return parse_shape(read_file(path), path.string()); }

std::string format_intrinsics(const CameraIntrinsics& k) {
  return fmt::format("fx = {}\nfy = {}\ncx = {}\ncy = {}\nwidth = {}\nheight = {}\n", format_double(k.fx),
                     format_double(k.fy), format_double(k.cx), format_double(k.cy), k.width, k.height);
}

CameraIntrinsics read_intrinsics(const std::filesystem::path& path) {
  const std::string source = path.string();
  const KeyValues kv = read_key_values(path);
  CameraIntrinsics k;
  k.fx = numbers(kv, "fx", 1, source)[0];
  k.fy = numbers(kv, "fy", 1, source)[0];
  k.cx = numbers(kv, "cx", 1, source)[0];
  k.cy = numbers(kv, "cy", 1, source)[0];
  if (kv.contains("width")) k.width = static_cast<int>(numbers(kv, "width", 1, source)[0]);
  if (kv.contains("height")) k.height = static_cast<int>(numbers(kv, "height", 1, source)[0]);
  k.validate();
  return k;
}

std::string format_transform(const RigidTransform& x) {
  return "# tracker -> camera\nrotation = " + fmt_quat(x.rotation) + "\ntranslation = " + fmt_vec(x.translation) + "\n";
}

RigidTransform parse_transform(const std::string& text, const std::string& source) {
  const KeyValues kv = parse_key_values(text, source);
  RigidTransform x;
  x.rotation = quat(kv, "rotation", source);
  x.translation = vec3(kv, "translation", source);
  if (!is_unit(x.rotation)) throw Error(ErrorKind::InvalidInput, source + ": rotation is not a unit quaternion");
  return x;
}

std::string format_sensor_log(const std::vector<SensorFrame>& frames) {
  std::string out = "timestamp_us,sensor_id,x,y,z,qw,qx,qy,qz\n";
  for (const SensorFrame& f : frames) {
    for (const SensorReading& r : f.readings) {
      const Quat& q = r.orientation;
      out += fmt::format("{},{},{},{},{},{},{},{},{}\n", f.timestamp_us, r.sensor_id, format_double(r.position.x()),
                         format_double(r.position.y()), format_double(r.position.z()), format_double(q.w()),
                         format_double(q.x()), format_double(q.y()), format_double(q.z()));
    }
  }
  return out;
}

std::vector<SensorFrame> parse_sensor_log(const std::string& text, const std::string& source) {
  const auto rows = csv_rows(text, "timestamp_us,sensor_id,x,y,z,qw,qx,qy,qz", source, 9);
  std::vector<SensorFrame> frames;
  std::vector<unsigned> seen;  // bitmask of sensor ids per frame
  for (const CsvRow& row : rows) {
    const std::int64_t ts = to_int(row.cells[0], source, row.line);
    const std::int64_t id = to_int(row.cells[1], source, row.line);
    if (id < 1 || id > kNumSensors) parse_error(source, row.line, fmt::format("sensor id {} out of range", id));
    if (frames.empty() || frames.back().timestamp_us != ts) {
      if (!frames.empty() && ts < frames.back().timestamp_us) parse_error(source, row.line, "timestamps go backwards");
      SensorFrame f;
      f.timestamp_us = ts;
      for (SensorReading& r : f.readings) r.sensor_id = 0;  // absent until read
      frames.push_back(f);
      seen.push_back(0);
    }
    const unsigned bit = 1u << (id - 1);
    if (seen.back() & bit) parse_error(source, row.line, fmt::format("sensor S{} repeated in frame", id));
    seen.back() |= bit;
    SensorReading& r = frames.back().sensor(static_cast<int>(id));
    r.sensor_id = static_cast<int>(id);
    r.position = Vec3(to_double(row.cells[2], source, row.line), to_double(row.cells[3], source, row.line),
                      to_double(row.cells[4], source, row.line));
    r.orientation = Quat(to_double(row.cells[5], source, row.line), to_double(row.cells[6], source, row.line),
                         to_double(row.cells[7], source, row.line), to_double(row.cells[8], source, row.line));
  }
  return frames;
}

std::string format_annotations(const std::vector<AnnotationRow>& rows) {
  std::string out = annotation_header() + "\n";
  for (const AnnotationRow& r : rows) {
    out += std::to_string(r.timestamp_us);
    for (const Vec3& p : r.skeleton.positions) {
      out += "," + format_double(p.x()) + "," + format_double(p.y()) + "," + format_double(p.z());
    }
    out += "," + r.status + "\n";
  }
  return out;
}

std::vector<AnnotationRow> parse_annotations(const std::string& text, const std::string& source) {
  const auto rows = csv_rows(text, annotation_header(), source, 2 + 3 * kNumJoints);
  std::vector<AnnotationRow> out;
  out.reserve(rows.size());
  for (const CsvRow& row : rows) {
    AnnotationRow a;
    a.timestamp_us = to_int(row.cells[0], source, row.line);
    for (std::size_t j = 0; j < static_cast<std::size_t>(kNumJoints); ++j) {
      Vec3& p = a.skeleton.positions[j];
      for (Eigen::Index c = 0; c < 3; ++c) {
        const auto cell = row.cells[1 + 3 * j + static_cast<std::size_t>(c)];
        p(c) = cell == "nan" ? std::numeric_limits<double>::quiet_NaN() : to_double(cell, source, row.line);
      }
    }
    a.status = std::string(row.cells.back());
    out.push_back(std::move(a));
  }
  return out;
}

std::string format_correspondences(const std::vector<Correspondence>& c) {
  std::string out = "x,y,z,u,v\n";
  for (const auto& cr : c) {
    out += fmt::format("{},{},{},{},{}\n", format_double(cr.tracker_point.x()), format_double(cr.tracker_point.y()),
                       format_double(cr.tracker_point.z()), format_double(cr.pixel.x()), format_double(cr.pixel.y()));
  }
  return out;
}

std::vector<Correspondence> parse_correspondences(const std::string& text, const std::string& source) {
  std::vector<Correspondence> out;
  for (const CsvRow& row : csv_rows(text, "x,y,z,u,v", source, 5)) {
    std::array<double, 5> v{};
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = to_double(row.cells[i], source, row.line);
    out.push_back({Vec3(v[0], v[1], v[2]), Vec2(v[3], v[4])});
  }
  return out;
}

std::string format_events(const std::vector<TimedEvent>& e) {
  std::string out = "timestamp_us,id\n";
  for (const auto& ev : e) out += fmt::format("{},{}\n", ev.timestamp_us, ev.id);
  return out;
}

std::vector<TimedEvent> parse_events(const std::string& text, const std::string& source) {
  std::vector<TimedEvent> out;
  for (const CsvRow& row : csv_rows(text, "timestamp_us,id", source, 2)) {
    out.push_back({to_int(row.cells[0], source, row.line), to_int(row.cells[1], source, row.line)});
  }
  return out;
}

std::string format_pairs(const std::vector<SyncPair>& p) {
  std::string out = "depth_id,sensor_id,gap_us,extrapolated\n";
  for (const auto& s : p) out += fmt::format("{},{},{},{}\n", s.depth_id, s.sensor_id, s.gap_us, s.extrapolated ? 1 : 0);
  return out;
}

std::string format_schedule(const CaptureSchedule& s) {
  std::string out = "segment_type,pair_a,pair_b,region,frames\n";
  for (const Segment& seg : s.segments) {
    out += fmt::format("{},{},{},{},{}\n", segment_name(seg.type), seg.pose_a, seg.pose_b, seg.region, seg.frames);
  }
  return out;
}

CaptureSchedule parse_schedule(const std::string& text, const std::string& source) {
  CaptureSchedule s;
  for (const CsvRow& row : csv_rows(text, "segment_type,pair_a,pair_b,region,frames", source, 5)) {
    Segment seg;
    const auto type = row.cells[0];
    if (type == "schemed") {
      seg.type = SegmentType::Schemed;
    } else if (type == "random") {
      seg.type = SegmentType::Random;
    } else if (type == "egocentric") {
      seg.type = SegmentType::Egocentric;
    } else {
      parse_error(source, row.line, fmt::format("unknown segment type '{}'", type));
    }
    seg.pose_a = static_cast<int>(to_int(row.cells[1], source, row.line));
    seg.pose_b = static_cast<int>(to_int(row.cells[2], source, row.line));
    seg.region = static_cast<int>(to_int(row.cells[3], source, row.line));
    seg.frames = to_int(row.cells[4], source, row.line);
    s.segments.push_back(seg);
  }
  return s;
}

std::string format_curve(const std::vector<CurveRow>& rows) {
  std::string out = "eps_mm,joints_within,frames_within\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{}\n", format_double(r.eps), format_double(r.joints), format_double(r.frames));
  }
  return out;
}

}  // namespace handann::io
