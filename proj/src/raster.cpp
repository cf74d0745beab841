#include "carlift/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include <zlib.h>

#include "carlift/errors.hpp"

namespace carlift {

void RgbImage::set(std::size_t x, std::size_t y, std::uint8_t r, std::uint8_t g,
                   std::uint8_t b) {
    const std::size_t idx = 3 * (y * width + x);
    pixels[idx] = r;
    pixels[idx + 1] = g;
    pixels[idx + 2] = b;
}

namespace {

// Anchor colors of the sequential map, expanded to 256 entries by linear
// interpolation at first use.
constexpr std::uint8_t kAnchors[][3] = {
    {68, 1, 84},    {72, 26, 108},  {71, 47, 125},  {65, 68, 135},
    {57, 86, 140},  {49, 104, 142}, {42, 120, 142}, {35, 136, 142},
    {31, 152, 139}, {34, 168, 132}, {53, 183, 121}, {84, 197, 104},
    {122, 209, 81}, {165, 219, 54}, {210, 226, 27}, {253, 231, 37},
};
constexpr int kAnchorCount = static_cast<int>(sizeof(kAnchors) / sizeof(kAnchors[0]));

Colormap build_sequential() {
    Colormap cm{};
    for (int i = 0; i < 256; ++i) {
        const double pos = static_cast<double>(i) / 255.0 * (kAnchorCount - 1);
        const int lo = std::min(kAnchorCount - 2, static_cast<int>(pos));
        const double frac = pos - lo;
        for (int c = 0; c < 3; ++c) {
            const double v = (1.0 - frac) * kAnchors[lo][c] + frac * kAnchors[lo + 1][c];
            cm.table[i][c] = static_cast<std::uint8_t>(std::lround(v));
        }
    }
    return cm;
}

void append_u32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>((v >> 24) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>(v & 0xff));
}

void append_chunk(std::string& out, const char type[4], const std::string& payload) {
    append_u32(out, static_cast<std::uint32_t>(payload.size()));
    std::string body(type, 4);
    body += payload;
    out += body;
    const auto crc = crc32(0L, reinterpret_cast<const Bytef*>(body.data()),
                           static_cast<uInt>(body.size()));
    append_u32(out, static_cast<std::uint32_t>(crc));
}

}  // namespace

const Colormap& Colormap::sequential() {
    static const Colormap cm = build_sequential();
    return cm;
}

void map_value(const Colormap& cm, double v, double lo, double hi, std::uint8_t rgb[3]) {
    double t = (v - lo) / (hi - lo);
    t = std::clamp(t, 0.0, 1.0);
    const int idx = static_cast<int>(std::lround(t * 255.0));
    rgb[0] = cm.table[idx][0];
    rgb[1] = cm.table[idx][1];
    rgb[2] = cm.table[idx][2];
}

void write_png(const std::filesystem::path& path, const RgbImage& image) {
    if (image.width == 0 || image.height == 0 ||
        image.pixels.size() != 3 * image.width * image.height)
        throw PreconditionError("write_png: inconsistent image dimensions");

    // Raw scanlines, each prefixed with filter byte 0.
    std::string raw;
    raw.reserve(image.height * (1 + 3 * image.width));
    for (std::size_t y = 0; y < image.height; ++y) {
        raw.push_back('\0');
        raw.append(reinterpret_cast<const char*>(&image.pixels[3 * y * image.width]),
                   3 * image.width);
    }

    uLongf bound = compressBound(static_cast<uLong>(raw.size()));
    std::string compressed(bound, '\0');
    if (compress2(reinterpret_cast<Bytef*>(compressed.data()), &bound,
                  reinterpret_cast<const Bytef*>(raw.data()),
                  static_cast<uLong>(raw.size()), 9) != Z_OK)
        throw Error("write_png: deflate failed");
    compressed.resize(bound);

    std::string ihdr;
    append_u32(ihdr, static_cast<std::uint32_t>(image.width));
    append_u32(ihdr, static_cast<std::uint32_t>(image.height));
    ihdr.push_back(8);   // bit depth
    ihdr.push_back(2);   // color type: RGB
    ihdr.push_back(0);   // compression
    ihdr.push_back(0);   // filter
    ihdr.push_back(0);   // interlace

    std::string out("\x89PNG\r\n\x1a\n", 8);
    append_chunk(out, "IHDR", ihdr);
    append_chunk(out, "IDAT", compressed);
    append_chunk(out, "IEND", "");

    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("write_png: cannot open " + path.string());
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw Error("write_png: write failed for " + path.string());
}

}  // namespace carlift
