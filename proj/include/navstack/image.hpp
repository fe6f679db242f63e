#ifndef NAVSTACK_IMAGE_HPP
#define NAVSTACK_IMAGE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace navstack {

struct ImageRGB {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // row-major RGB triples, width*height*3

    ImageRGB() = default;
    ImageRGB(int w, int h) : width(w), height(h), pixels(static_cast<size_t>(w) * h * 3, 0) {}

    std::uint8_t* at(int x, int y) { return &pixels[3 * (static_cast<size_t>(y) * width + x)]; }
    const std::uint8_t* at(int x, int y) const {
        return &pixels[3 * (static_cast<size_t>(y) * width + x)];
    }
    void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        std::uint8_t* p = at(x, y);
        p[0] = r;
        p[1] = g;
        p[2] = b;
    }
};

struct ImageBinary {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // row-major, values 0 or 1

    ImageBinary() = default;
    ImageBinary(int w, int h) : width(w), height(h), pixels(static_cast<size_t>(w) * h, 0) {}

    std::uint8_t at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
    void set(int x, int y, std::uint8_t v) { pixels[static_cast<size_t>(y) * width + x] = v; }
    // Zero-padded read for window filters.
    std::uint8_t at_or_zero(int x, int y) const {
        if (x < 0 || y < 0 || x >= width || y >= height) return 0;
        return at(x, y);
    }
};

// Binary portable pixmap / graymap. Headers are written in one fixed shape
// ("P6\n<w> <h>\n255\n") so identical images produce identical files. Masks
// store 1 as 255 on disk; reading maps >= 128 back to 1.
// Throw ConfigError on malformed files.
void write_ppm(const std::string& path, const ImageRGB& img);
ImageRGB read_ppm(const std::string& path);
void write_pgm(const std::string& path, const ImageBinary& img);
ImageBinary read_pgm(const std::string& path);

}  // namespace navstack

#endif
