#ifndef LOP_IMAGE_IO_HPP
#define LOP_IMAGE_IO_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "lop/image.hpp"
#include "lop/segmenter.hpp"

namespace lop {

// Minimal 8-bit PNG writer (grayscale or RGB) backed by zlib.
void write_png_gray(const std::filesystem::path& path, int width, int height,
                    const std::vector<std::uint8_t>& pixels);
void write_png_rgb(const std::filesystem::path& path, int width, int height,
                   const std::vector<std::uint8_t>& pixels);

// Debug renderings: range tone-mapped by 255/(1+r), intensity raw, labels
// through a fixed 64-color palette (0 black, background dark gray).
void write_range_png(const std::filesystem::path& path, const ImageSet& img);
void write_intensity_png(const std::filesystem::path& path, const ImageSet& img);
void write_labels_png(const std::filesystem::path& path, const LabelImage& labels);

// Binary ImageSet dump consumed by the `viz` subcommand.
struct ImageSetDump {
  ImageSet images;
  std::optional<LabelImage> labels;
  std::int64_t query_index = 0;
};

void save_image_set(const std::filesystem::path& path, const ImageSet& img,
                    const LabelImage* labels, std::int64_t query_index);
ImageSetDump load_image_set(const std::filesystem::path& path);

}  // namespace lop

#endif  // LOP_IMAGE_IO_HPP
