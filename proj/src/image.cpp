#include "oacam/image.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "oacam/errors.hpp"

namespace oacam {

namespace {

bool has_suffix(const std::string& s, const std::string& suffix) {
    if (s.size() < suffix.size()) return false;
    std::string tail = s.substr(s.size() - suffix.size());
    std::transform(tail.begin(), tail.end(), tail.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return tail == suffix;
}

GrayImage load_png(const std::string& path) {
    png_image png{};
    png.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&png, path.c_str())) {
        throw IoError("cannot read PNG: " + path + " (" + png.message + ")");
    }
    png.format = PNG_FORMAT_RGB;
    std::vector<std::uint8_t> rgb(PNG_IMAGE_SIZE(png));
    if (!png_image_finish_read(&png, nullptr, rgb.data(), 0, nullptr)) {
        std::string msg = png.message;
        png_image_free(&png);
        throw FormatError("PNG decode failed: " + path + " (" + msg + ")");
    }
    GrayImage img;
    img.width = png.width;
    img.height = png.height;
    img.data.resize(static_cast<std::size_t>(img.width) * img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        std::uint8_t r = rgb[3 * i], g = rgb[3 * i + 1], b = rgb[3 * i + 2];
        if (r == g && g == b) {
            img.data[i] = r;  // grayscale passthrough
        } else {
            double luma = 0.299 * r + 0.587 * g + 0.114 * b;
            img.data[i] = static_cast<std::uint8_t>(std::floor(luma + 0.5));
        }
    }
    return img;
}

}  // namespace

GrayImage load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);

    auto next_token = [&in, &path]() {
        std::string tok;
        int c;
        while ((c = in.get()) != EOF) {
            if (c == '#') {
                while ((c = in.get()) != EOF && c != '\n') {}
            } else if (!std::isspace(c)) {
                tok.push_back(static_cast<char>(c));
                while ((c = in.peek()) != EOF && !std::isspace(c) && c != '#') {
                    tok.push_back(static_cast<char>(in.get()));
                }
                return tok;
            }
        }
        throw FormatError("truncated PGM header: " + path);
    };

    if (next_token() != "P5") throw FormatError("not a binary PGM (P5): " + path);
    GrayImage img;
    try {
        img.width = static_cast<std::uint32_t>(std::stoul(next_token()));
        img.height = static_cast<std::uint32_t>(std::stoul(next_token()));
        unsigned long maxval = std::stoul(next_token());
        if (maxval != 255) throw FormatError("PGM maxval must be 255: " + path);
    } catch (const std::invalid_argument&) {
        throw FormatError("bad PGM header field: " + path);
    }
    in.get();  // single whitespace after maxval
    img.data.resize(static_cast<std::size_t>(img.width) * img.height);
    in.read(reinterpret_cast<char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size()));
    if (static_cast<std::size_t>(in.gcount()) != img.data.size()) {
        throw FormatError("truncated PGM pixel data: " + path);
    }
    return img;
}

void save_pgm(const GrayImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write: " + path);
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data.data()),
              static_cast<std::streamsize>(img.data.size()));
    if (!out) throw IoError("write failed: " + path);
}

GrayImage load_grayscale(const std::string& path) {
    if (has_suffix(path, ".pgm")) return load_pgm(path);
    if (has_suffix(path, ".png")) return load_png(path);
    throw FormatError("unsupported format (need .png or .pgm): " + path);
}

GrayImage synth_image(SynthKind kind, std::uint32_t width, std::uint32_t height,
                      std::uint8_t constant, std::uint32_t cell) {
    if (width == 0 || height == 0) throw ArgumentError("zero image dimension");
    GrayImage img;
    img.width = width;
    img.height = height;
    img.data.resize(static_cast<std::size_t>(width) * height);
    for (std::uint32_t y = 0; y < height; ++y) {
        for (std::uint32_t x = 0; x < width; ++x) {
            std::uint8_t v = 0;
            switch (kind) {
                case SynthKind::Constant:
                    v = constant;
                    break;
                case SynthKind::HRamp:
                    v = width == 1 ? 0
                                   : static_cast<std::uint8_t>(
                                         255ull * x / (width - 1));
                    break;
                case SynthKind::VRamp:
                    v = height == 1 ? 0
                                    : static_cast<std::uint8_t>(
                                          255ull * y / (height - 1));
                    break;
                case SynthKind::Checker: {
                    if (cell == 0) throw ArgumentError("zero checker cell");
                    v = ((x / cell + y / cell) % 2 == 0) ? 0 : 255;
                    break;
                }
            }
            img.at(x, y) = v;
        }
    }
    return img;
}

GrayImage rotate90(const GrayImage& img) {
    GrayImage out;
    out.width = img.height;
    out.height = img.width;
    out.data.resize(img.data.size());
    // (x, y) -> (y, width-1-x)
    for (std::uint32_t y = 0; y < img.height; ++y) {
        for (std::uint32_t x = 0; x < img.width; ++x) {
            out.at(y, img.width - 1 - x) = img.at(x, y);
        }
    }
    return out;
}

}  // namespace oacam
