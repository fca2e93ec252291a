#include "lop/image_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>

#include <zlib.h>

namespace lop {

namespace {

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void append_chunk(std::vector<std::uint8_t>& out, const char type[4],
                  const std::vector<std::uint8_t>& payload) {
  put_be32(out, static_cast<std::uint32_t>(payload.size()));
  const std::size_t crc_start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), payload.begin(), payload.end());
  const uLong crc =
      crc32(0L, out.data() + crc_start, static_cast<uInt>(out.size() - crc_start));
  put_be32(out, static_cast<std::uint32_t>(crc));
}

void write_png(const std::filesystem::path& path, int width, int height,
               int channels, const std::vector<std::uint8_t>& pixels) {
  if (pixels.size() != static_cast<std::size_t>(width) * height * channels) {
    throw ValidationError("png pixel buffer size mismatch");
  }
  // raw scanlines with filter byte 0
  std::vector<std::uint8_t> raw;
  raw.reserve(static_cast<std::size_t>(height) * (1 + width * channels));
  for (int r = 0; r < height; ++r) {
    raw.push_back(0);
    const std::uint8_t* row = pixels.data() + static_cast<std::size_t>(r) * width * channels;
    raw.insert(raw.end(), row, row + static_cast<std::size_t>(width) * channels);
  }
  uLongf compressed_size = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> compressed(compressed_size);
  if (compress2(compressed.data(), &compressed_size, raw.data(),
                static_cast<uLong>(raw.size()), 6) != Z_OK) {
    throw Error("png: zlib compression failed");
  }
  compressed.resize(compressed_size);

  std::vector<std::uint8_t> png = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  std::vector<std::uint8_t> ihdr;
  put_be32(ihdr, static_cast<std::uint32_t>(width));
  put_be32(ihdr, static_cast<std::uint32_t>(height));
  ihdr.push_back(8);                                    // bit depth
  ihdr.push_back(channels == 1 ? 0 : 2);                // gray / rgb
  ihdr.push_back(0);
  ihdr.push_back(0);
  ihdr.push_back(0);
  append_chunk(png, "IHDR", ihdr);
  append_chunk(png, "IDAT", compressed);
  append_chunk(png, "IEND", {});

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot write " + path.string());
  }
  out.write(reinterpret_cast<const char*>(png.data()),
            static_cast<std::streamsize>(png.size()));
}

std::uint8_t clamp_u8(double v) {
  return static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
}

// 64 distinct cluster colors, generated once from a golden-ratio hue walk.
const std::array<std::array<std::uint8_t, 3>, 64>& label_palette() {
  static const auto palette = [] {
    std::array<std::array<std::uint8_t, 3>, 64> p{};
    for (int i = 0; i < 64; ++i) {
      const double hue = std::fmod(i * 0.61803398875, 1.0) * 6.0;
      const double sat = (i % 2) ? 1.0 : 0.65;
      const double val = (i % 3) ? 1.0 : 0.75;
      const int sector = static_cast<int>(hue);
      const double f = hue - sector;
      const double q = val * (1.0 - sat * f);
      const double t = val * (1.0 - sat * (1.0 - f));
      const double lo = val * (1.0 - sat);
      double r = 0, g = 0, b = 0;
      switch (sector % 6) {
        case 0: r = val; g = t; b = lo; break;
        case 1: r = q; g = val; b = lo; break;
        case 2: r = lo; g = val; b = t; break;
        case 3: r = lo; g = q; b = val; break;
        case 4: r = t; g = lo; b = val; break;
        case 5: r = val; g = lo; b = q; break;
      }
      p[i] = {clamp_u8(r * 255.0), clamp_u8(g * 255.0), clamp_u8(b * 255.0)};
    }
    return p;
  }();
  return palette;
}

constexpr char kDumpMagic[8] = {'L', 'O', 'P', 'I', 'M', 'G', '0', '1'};

template <typename T>
void write_pod(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_pod(std::istream& in, T& v) {
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
}

}  // namespace

void write_png_gray(const std::filesystem::path& path, int width, int height,
                    const std::vector<std::uint8_t>& pixels) {
  write_png(path, width, height, 1, pixels);
}

void write_png_rgb(const std::filesystem::path& path, int width, int height,
                   const std::vector<std::uint8_t>& pixels) {
  write_png(path, width, height, 3, pixels);
}

void write_range_png(const std::filesystem::path& path, const ImageSet& img) {
  std::vector<std::uint8_t> px(img.range.size());
  for (std::size_t i = 0; i < img.range.size(); ++i) {
    px[i] = img.valid(i) ? clamp_u8(255.0 / (1.0 + img.range[i])) : 0;
  }
  write_png_gray(path, img.geometry.cols, img.geometry.rows, px);
}

void write_intensity_png(const std::filesystem::path& path, const ImageSet& img) {
  std::vector<std::uint8_t> px(img.intensity.size());
  for (std::size_t i = 0; i < img.intensity.size(); ++i) {
    px[i] = img.valid(i) ? clamp_u8(img.intensity[i]) : 0;
  }
  write_png_gray(path, img.geometry.cols, img.geometry.rows, px);
}

void write_labels_png(const std::filesystem::path& path, const LabelImage& labels) {
  const auto& palette = label_palette();
  std::vector<std::uint8_t> px(labels.labels.size() * 3, 0);
  for (std::size_t i = 0; i < labels.labels.size(); ++i) {
    const std::uint32_t label = labels.labels[i];
    if (label == kLabelNone) {
      continue;
    }
    if (label == kLabelBackground) {
      px[i * 3] = px[i * 3 + 1] = px[i * 3 + 2] = 60;
      continue;
    }
    const auto& c = palette[(label - kLabelFirstCluster) % palette.size()];
    px[i * 3] = c[0];
    px[i * 3 + 1] = c[1];
    px[i * 3 + 2] = c[2];
  }
  write_png_rgb(path, labels.geometry.cols, labels.geometry.rows, px);
}

void save_image_set(const std::filesystem::path& path, const ImageSet& img,
                    const LabelImage* labels, std::int64_t query_index) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot write " + path.string());
  }
  out.write(kDumpMagic, sizeof(kDumpMagic));
  write_pod(out, query_index);
  write_pod(out, static_cast<std::int32_t>(img.geometry.rows));
  write_pod(out, static_cast<std::int32_t>(img.geometry.cols));
  write_pod(out, img.geometry.elevation_max_deg);
  write_pod(out, static_cast<std::int64_t>(img.discarded_out_of_fov));

  const std::size_t n = img.range.size();
  out.write(reinterpret_cast<const char*>(img.range.data()), n * sizeof(double));
  out.write(reinterpret_cast<const char*>(img.intensity.data()), n * sizeof(double));
  out.write(reinterpret_cast<const char*>(img.state.data()), n * sizeof(PixelState));
  for (const Eigen::Vector3d& v : img.normal) {
    write_pod(out, v.x());
    write_pod(out, v.y());
    write_pod(out, v.z());
  }
  out.write(reinterpret_cast<const char*>(img.index.data()), n * sizeof(std::int32_t));

  const std::uint8_t has_labels = labels ? 1 : 0;
  write_pod(out, has_labels);
  if (labels) {
    write_pod(out, labels->next_label);
    out.write(reinterpret_cast<const char*>(labels->labels.data()),
              n * sizeof(std::uint32_t));
  }
}

ImageSetDump load_image_set(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open " + path.string());
  }
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kDumpMagic, sizeof(magic)) != 0) {
    throw ParseError("not an image-set dump: " + path.string());
  }
  ImageSetDump dump;
  std::int32_t rows = 0, cols = 0;
  read_pod(in, dump.query_index);
  read_pod(in, rows);
  read_pod(in, cols);
  ImageGeometry geom;
  geom.rows = rows;
  geom.cols = cols;
  read_pod(in, geom.elevation_max_deg);
  std::int64_t discarded = 0;
  read_pod(in, discarded);
  if (rows <= 0 || cols <= 0 || rows > 1 << 16 || cols > 1 << 16) {
    throw ParseError("image-set dump has implausible geometry");
  }

  dump.images = ImageSet(geom);
  dump.images.discarded_out_of_fov = static_cast<std::size_t>(discarded);
  const std::size_t n = dump.images.range.size();
  in.read(reinterpret_cast<char*>(dump.images.range.data()), n * sizeof(double));
  in.read(reinterpret_cast<char*>(dump.images.intensity.data()), n * sizeof(double));
  in.read(reinterpret_cast<char*>(dump.images.state.data()), n * sizeof(PixelState));
  for (Eigen::Vector3d& v : dump.images.normal) {
    read_pod(in, v.x());
    read_pod(in, v.y());
    read_pod(in, v.z());
  }
  in.read(reinterpret_cast<char*>(dump.images.index.data()), n * sizeof(std::int32_t));

  std::uint8_t has_labels = 0;
  read_pod(in, has_labels);
  if (has_labels) {
    LabelImage labels;
    labels.geometry = geom;
    read_pod(in, labels.next_label);
    labels.labels.resize(n);
    in.read(reinterpret_cast<char*>(labels.labels.data()), n * sizeof(std::uint32_t));
    dump.labels = std::move(labels);
  }
  if (!in) {
    throw TruncationError("image-set dump truncated: " + path.string());
  }
  return dump;
}

}  // namespace lop
