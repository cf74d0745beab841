#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace carlift {

/// 8-bit RGB image, row 0 at the top.
struct RgbImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;  // 3 bytes per pixel, row major

    void set(std::size_t x, std::size_t y, std::uint8_t r, std::uint8_t g,
             std::uint8_t b);
};

/// Fixed 256-entry sequential colormap (dark violet to yellow).
struct Colormap {
    static const Colormap& sequential();
    std::uint8_t table[256][3];
};

/// Maps v in [lo, hi] to a colormap entry (clamped).
void map_value(const Colormap& cm, double v, double lo, double hi, std::uint8_t rgb[3]);

/// Writes an 8-bit RGB PNG (zlib-compressed scanlines).
void write_png(const std::filesystem::path& path, const RgbImage& image);

}  // namespace carlift
