#ifndef LOP_SCAN_IO_HPP
#define LOP_SCAN_IO_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lop/types.hpp"

namespace lop::scan_io {

struct PcdParseResult {
  LidarScan scan;
  std::size_t dropped_nan = 0;  // returns removed because x/y/z/intensity was NaN
};

enum class PcdEncoding { kAscii, kBinary };

// Parses PCD v0.7 data with at least the FLOAT32 fields x y z intensity.
// Extra fields are skipped. Throws ParseError / UnsupportedSchemaError /
// TruncationError with the offending line or byte counts in the message.
PcdParseResult parse_pcd(const std::string& bytes);
PcdParseResult load_pcd(const std::filesystem::path& path);

void write_pcd(std::ostream& out, const LidarScan& scan,
               PcdEncoding encoding = PcdEncoding::kBinary);
void save_pcd(const std::filesystem::path& path, const LidarScan& scan,
              PcdEncoding encoding = PcdEncoding::kBinary);

// TUM trajectory rows: "t tx ty tz qx qy qz qw". Timestamps must be strictly
// increasing; quaternions are normalized on load when within 1e-3 of unit
// norm and rejected otherwise.
std::vector<Pose> parse_trajectory(const std::string& bytes);
std::vector<Pose> load_trajectory(const std::filesystem::path& path);

void write_trajectory(std::ostream& out, const std::vector<Pose>& poses);
void save_trajectory(const std::filesystem::path& path,
                     const std::vector<Pose>& poses);

struct AlignedPose {
  Pose pose;
  bool extrapolated = false;  // scan time fell outside the trajectory span
};

// Interpolates the trajectory at scan_time (lerp on translation, slerp on
// rotation). Clamps to the ends when out of range; more than max_extrapolation
// seconds beyond either end is an AlignmentError.
AlignedPose align_scan_pose(double scan_time, const std::vector<Pose>& trajectory,
                            double max_extrapolation = 0.5);

// Dataset directory layout: <timestamp_ns>.pcd files plus trajectory.txt.
struct DatasetIndex {
  std::vector<std::filesystem::path> scan_files;  // sorted by timestamp
  std::vector<double> scan_times;                 // seconds
  std::filesystem::path trajectory_file;
};

DatasetIndex index_dataset(const std::filesystem::path& dir);

}  // namespace lop::scan_io

#endif  // LOP_SCAN_IO_HPP
