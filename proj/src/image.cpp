#include "navstack/image.hpp"

#include <cctype>
#include <fstream>

#include "navstack/errors.hpp"

namespace navstack {

namespace {

// Skips whitespace and '#' comment lines between header tokens.
int next_header_int(std::istream& in, const std::string& path) {
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    if (c == EOF || !std::isdigit(c)) throw ConfigError(path + ": bad pnm header");
    int value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        c = in.get();
    }
    // c was the single whitespace after the token (or EOF); leave it consumed.
    return value;
}

void read_header(std::istream& in, const std::string& path, const char* magic, int& w, int& h) {
    char m0 = static_cast<char>(in.get());
    char m1 = static_cast<char>(in.get());
    if (m0 != magic[0] || m1 != magic[1])
        throw ConfigError(path + ": expected " + magic + " file");
    w = next_header_int(in, path);
    h = next_header_int(in, path);
    const int maxval = next_header_int(in, path);
    if (w <= 0 || h <= 0 || maxval != 255)
        throw ConfigError(path + ": unsupported pnm dimensions or depth");
}

}  // namespace

void write_ppm(const std::string& path, const ImageRGB& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError(path + ": cannot open for writing");
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
    if (!out) throw ConfigError(path + ": write failed");
}

ImageRGB read_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open");
    int w = 0, h = 0;
    read_header(in, path, "P6", w, h);
    ImageRGB img(w, h);
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size()))
        throw ConfigError(path + ": truncated pixel data");
    return img;
}

void write_pgm(const std::string& path, const ImageBinary& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError(path + ": cannot open for writing");
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    std::vector<std::uint8_t> bytes(img.pixels.size());
    for (size_t i = 0; i < img.pixels.size(); ++i) bytes[i] = img.pixels[i] ? 255 : 0;
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw ConfigError(path + ": write failed");
}

ImageBinary read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open");
    int w = 0, h = 0;
    read_header(in, path, "P5", w, h);
    ImageBinary img(w, h);
    std::vector<std::uint8_t> bytes(img.pixels.size());
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (in.gcount() != static_cast<std::streamsize>(bytes.size()))
        throw ConfigError(path + ": truncated pixel data");
    for (size_t i = 0; i < bytes.size(); ++i) img.pixels[i] = bytes[i] >= 128 ? 1 : 0;
    return img;
}

}  // namespace navstack
