#include "lop/scan_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace lop::scan_io {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) {
    out.push_back(tok);
  }
  return out;
}

struct PcdHeader {
  std::vector<std::string> fields;
  std::vector<int> sizes;
  std::vector<char> types;
  std::vector<int> counts;
  std::size_t points = 0;
  bool binary = false;
  std::size_t body_offset = 0;  // byte offset just past the DATA line
};

PcdHeader parse_header(const std::string& bytes) {
  PcdHeader hdr;
  std::size_t pos = 0;
  int line_no = 0;
  bool have_points = false;
  bool have_data = false;

  while (pos < bytes.size()) {
    std::size_t eol = bytes.find('\n', pos);
    if (eol == std::string::npos) {
      eol = bytes.size();
    }
    std::string line = bytes.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty() || line[0] == '#') {
      continue;
    }
    auto toks = split_ws(line);
    const std::string& key = toks[0];

    auto expect_count = [&](std::size_t n) {
      if (toks.size() < n + 1) {
        throw ParseError("pcd header line " + std::to_string(line_no) +
                         ": '" + key + "' needs " + std::to_string(n) + " values");
      }
    };

    if (key == "VERSION" || key == "WIDTH" || key == "HEIGHT" || key == "VIEWPOINT") {
      // accepted, not needed: POINTS is authoritative for the body size
    } else if (key == "FIELDS") {
      hdr.fields.assign(toks.begin() + 1, toks.end());
    } else if (key == "SIZE") {
      expect_count(hdr.fields.size());
      for (std::size_t i = 1; i < toks.size(); ++i) {
        hdr.sizes.push_back(std::stoi(toks[i]));
      }
    } else if (key == "TYPE") {
      expect_count(hdr.fields.size());
      for (std::size_t i = 1; i < toks.size(); ++i) {
        hdr.types.push_back(toks[i][0]);
      }
    } else if (key == "COUNT") {
      expect_count(hdr.fields.size());
      for (std::size_t i = 1; i < toks.size(); ++i) {
        hdr.counts.push_back(std::stoi(toks[i]));
      }
    } else if (key == "POINTS") {
      expect_count(1);
      long long n = std::stoll(toks[1]);
      if (n < 0) {
        throw ParseError("pcd header line " + std::to_string(line_no) +
                         ": negative POINTS");
      }
      hdr.points = static_cast<std::size_t>(n);
      have_points = true;
    } else if (key == "DATA") {
      expect_count(1);
      if (toks[1] == "ascii") {
        hdr.binary = false;
      } else if (toks[1] == "binary") {
        hdr.binary = true;
      } else {
        throw UnsupportedSchemaError("pcd header line " + std::to_string(line_no) +
                                     ": unsupported DATA mode '" + toks[1] + "'");
      }
      hdr.body_offset = pos;
      have_data = true;
      break;
    } else {
      throw ParseError("pcd header line " + std::to_string(line_no) +
                       ": unknown key '" + key + "'");
    }
  }

  if (hdr.fields.empty()) {
    throw ParseError("pcd header: missing FIELDS");
  }
  if (!have_points) {
    throw ParseError("pcd header: missing POINTS");
  }
  if (!have_data) {
    throw ParseError("pcd header: missing DATA");
  }
  if (hdr.sizes.size() != hdr.fields.size() || hdr.types.size() != hdr.fields.size()) {
    throw ParseError("pcd header: SIZE/TYPE arity does not match FIELDS");
  }
  if (hdr.counts.empty()) {
    hdr.counts.assign(hdr.fields.size(), 1);
  }
  return hdr;
}

int field_index(const PcdHeader& hdr, const std::string& name) {
  for (std::size_t i = 0; i < hdr.fields.size(); ++i) {
    if (hdr.fields[i] == name) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

}  // namespace

PcdParseResult parse_pcd(const std::string& bytes) {
  PcdHeader hdr = parse_header(bytes);

  const char* wanted[] = {"x", "y", "z", "intensity"};
  int idx[4];
  for (int i = 0; i < 4; ++i) {
    idx[i] = field_index(hdr, wanted[i]);
    if (idx[i] < 0) {
      throw UnsupportedSchemaError(std::string("pcd: missing field '") + wanted[i] + "'");
    }
    if (hdr.types[idx[i]] != 'F' || hdr.sizes[idx[i]] != 4 || hdr.counts[idx[i]] != 1) {
      throw UnsupportedSchemaError(std::string("pcd: field '") + wanted[i] +
                                   "' must be FLOAT32 count 1");
    }
  }

  PcdParseResult result;
  result.scan.points.reserve(hdr.points);

  if (hdr.binary) {
    std::size_t stride = 0;
    std::vector<std::size_t> offsets(hdr.fields.size());
    for (std::size_t i = 0; i < hdr.fields.size(); ++i) {
      offsets[i] = stride;
      stride += static_cast<std::size_t>(hdr.sizes[i]) * hdr.counts[i];
    }
    const std::size_t need = hdr.points * stride;
    const std::size_t have = bytes.size() - hdr.body_offset;
    if (have < need) {
      throw TruncationError("pcd body truncated: expected " + std::to_string(need) +
                            " bytes, got " + std::to_string(have));
    }
    const char* base = bytes.data() + hdr.body_offset;
    for (std::size_t p = 0; p < hdr.points; ++p) {
      const char* rec = base + p * stride;
      float v[4];
      for (int i = 0; i < 4; ++i) {
        std::memcpy(&v[i], rec + offsets[idx[i]], sizeof(float));
      }
      Point pt{v[0], v[1], v[2], v[3]};
      if (!pt.finite()) {
        ++result.dropped_nan;
        continue;
      }
      result.scan.points.push_back(pt);
    }
  } else {
    std::istringstream body(bytes.substr(hdr.body_offset));
    std::string line;
    std::size_t rows = 0;
    while (rows < hdr.points && std::getline(body, line)) {
      if (line.empty() || line == "\r") {
        continue;
      }
      auto toks = split_ws(line);
      if (toks.size() < hdr.fields.size()) {
        throw ParseError("pcd ascii row " + std::to_string(rows + 1) + ": expected " +
                         std::to_string(hdr.fields.size()) + " values, got " +
                         std::to_string(toks.size()));
      }
      float v[4];
      for (int i = 0; i < 4; ++i) {
        try {
          v[i] = std::stof(toks[idx[i]]);
        } catch (const std::exception&) {
          throw ParseError("pcd ascii row " + std::to_string(rows + 1) +
                           ": bad float '" + toks[idx[i]] + "'");
        }
      }
      ++rows;
      Point pt{v[0], v[1], v[2], v[3]};
      if (!pt.finite()) {
        ++result.dropped_nan;
        continue;
      }
      result.scan.points.push_back(pt);
    }
    if (rows < hdr.points) {
      throw TruncationError("pcd ascii body truncated: expected " +
                            std::to_string(hdr.points) + " rows, got " +
                            std::to_string(rows));
    }
  }
  return result;
}

PcdParseResult load_pcd(const std::filesystem::path& path) {
  return parse_pcd(read_file(path));
}

void write_pcd(std::ostream& out, const LidarScan& scan, PcdEncoding encoding) {
  const std::size_t n = scan.points.size();
  out << "# .PCD v0.7 - Point Cloud Data file format\n"
      << "VERSION 0.7\n"
      << "FIELDS x y z intensity\n"
      << "SIZE 4 4 4 4\n"
      << "TYPE F F F F\n"
      << "COUNT 1 1 1 1\n"
      << "WIDTH " << n << "\n"
      << "HEIGHT 1\n"
      << "VIEWPOINT 0 0 0 1 0 0 0\n"
      << "POINTS " << n << "\n";
  if (encoding == PcdEncoding::kBinary) {
    out << "DATA binary\n";
    for (const Point& p : scan.points) {
      float v[4] = {p.x, p.y, p.z, p.intensity};
      out.write(reinterpret_cast<const char*>(v), sizeof(v));
    }
  } else {
    out << "DATA ascii\n";
    char buf[128];
    for (const Point& p : scan.points) {
      std::snprintf(buf, sizeof(buf), "%.9g %.9g %.9g %.9g\n", p.x, p.y, p.z,
                    p.intensity);
      out << buf;
    }
  }
}

void save_pcd(const std::filesystem::path& path, const LidarScan& scan,
              PcdEncoding encoding) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ParseError("cannot write " + path.string());
  }
  write_pcd(out, scan, encoding);
}

std::vector<Pose> parse_trajectory(const std::string& bytes) {
  std::vector<Pose> poses;
  std::istringstream in(bytes);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty() || line[0] == '#') {
      continue;
    }
    auto toks = split_ws(line);
    if (toks.size() != 8) {
      throw ParseError("trajectory line " + std::to_string(line_no) +
                       ": expected 8 values, got " + std::to_string(toks.size()));
    }
    double v[8];
    for (int i = 0; i < 8; ++i) {
      try {
        v[i] = std::stod(toks[i]);
      } catch (const std::exception&) {
        throw ParseError("trajectory line " + std::to_string(line_no) +
                         ": bad number '" + toks[i] + "'");
      }
    }
    Pose pose;
    pose.timestamp = v[0];
    pose.translation = {v[1], v[2], v[3]};
    pose.rotation = Eigen::Quaterniond(v[7], v[4], v[5], v[6]);  // w, x, y, z
    if (!std::isfinite(pose.timestamp) || pose.timestamp < 0.0) {
      throw ValidationError("trajectory line " + std::to_string(line_no) +
                            ": timestamp must be finite and non-negative");
    }
    const double norm = pose.rotation.norm();
    if (std::abs(norm - 1.0) > 1e-3) {
      throw ValidationError("trajectory line " + std::to_string(line_no) +
                            ": quaternion norm " + std::to_string(norm) +
                            " off unit by more than 1e-3");
    }
    pose.rotation.normalize();
    if (!poses.empty() && pose.timestamp <= poses.back().timestamp) {
      throw OrderingError("trajectory line " + std::to_string(line_no) +
                          ": timestamp not strictly increasing");
    }
    poses.push_back(pose);
  }
  return poses;
}

std::vector<Pose> load_trajectory(const std::filesystem::path& path) {
  return parse_trajectory(read_file(path));
}

void write_trajectory(std::ostream& out, const std::vector<Pose>& poses) {
  char buf[256];
  for (const Pose& p : poses) {
    std::snprintf(buf, sizeof(buf), "%.9f %.9g %.9g %.9g %.9g %.9g %.9g %.9g\n",
                  p.timestamp, p.translation.x(), p.translation.y(),
                  p.translation.z(), p.rotation.x(), p.rotation.y(),
                  p.rotation.z(), p.rotation.w());
    out << buf;
  }
}

void save_trajectory(const std::filesystem::path& path,
                     const std::vector<Pose>& poses) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ParseError("cannot write " + path.string());
  }
  write_trajectory(out, poses);
}

AlignedPose align_scan_pose(double scan_time, const std::vector<Pose>& trajectory,
                            double max_extrapolation) {
  if (trajectory.empty()) {
    throw AlignmentError("empty trajectory");
  }
  AlignedPose out;
  const Pose& first = trajectory.front();
  const Pose& last = trajectory.back();

  if (scan_time < first.timestamp) {
    if (first.timestamp - scan_time > max_extrapolation) {
      throw AlignmentError("scan time " + std::to_string(scan_time) + " precedes trajectory start " +
                           std::to_string(first.timestamp) + " by more than " +
                           std::to_string(max_extrapolation) + " s");
    }
    out.pose = first;
    out.pose.timestamp = scan_time;
    out.extrapolated = true;
    return out;
  }
  if (scan_time > last.timestamp) {
    if (scan_time - last.timestamp > max_extrapolation) {
      throw AlignmentError("scan time " + std::to_string(scan_time) + " exceeds trajectory end " +
                           std::to_string(last.timestamp) + " by more than " +
                           std::to_string(max_extrapolation) + " s");
    }
    out.pose = last;
    out.pose.timestamp = scan_time;
    out.extrapolated = true;
    return out;
  }

  // binary search for the bracketing pair
  auto it = std::lower_bound(trajectory.begin(), trajectory.end(), scan_time,
                             [](const Pose& p, double t) { return p.timestamp < t; });
  if (it->timestamp == scan_time) {
    out.pose = *it;
    return out;
  }
  const Pose& hi = *it;
  const Pose& lo = *(it - 1);
  const double u = (scan_time - lo.timestamp) / (hi.timestamp - lo.timestamp);

  out.pose.timestamp = scan_time;
  out.pose.translation = (1.0 - u) * lo.translation + u * hi.translation;
  out.pose.rotation = lo.rotation.slerp(u, hi.rotation);
  return out;
}

DatasetIndex index_dataset(const std::filesystem::path& dir) {
  DatasetIndex index;
  if (!std::filesystem::is_directory(dir)) {
    throw ParseError("dataset directory not found: " + dir.string());
  }
  std::vector<std::pair<std::int64_t, std::filesystem::path>> stamped;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".pcd") {
      continue;
    }
    const std::string stem = entry.path().stem().string();
    std::int64_t ns = 0;
    auto [ptr, ec] = std::from_chars(stem.data(), stem.data() + stem.size(), ns);
    if (ec != std::errc{} || ptr != stem.data() + stem.size()) {
      throw ParseError("pcd filename is not a nanosecond timestamp: " +
                       entry.path().filename().string());
    }
    stamped.emplace_back(ns, entry.path());
  }
  std::sort(stamped.begin(), stamped.end());
  for (const auto& [ns, path] : stamped) {
    index.scan_files.push_back(path);
    index.scan_times.push_back(static_cast<double>(ns) * 1e-9);
  }
  index.trajectory_file = dir / "trajectory.txt";
  return index;
}

}  // namespace lop::scan_io
