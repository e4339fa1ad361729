#include "pterrace/imageio.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "pterrace/error.hpp"
#include "pterrace/rng.hpp"

namespace pterrace {

namespace {

class PgmReader {
public:
    explicit PgmReader(std::string_view bytes) : b_(bytes) {}

    void skip_space_and_comments() {
        while (pos_ < b_.size()) {
            const char c = b_[pos_];
            if (c == '#') {
                while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    // Unsigned decimal token; `what` names it in errors.
    unsigned long number(const char* what, bool header) {
        skip_space_and_comments();
        const std::size_t start = pos_;
        unsigned long v = 0;
        while (pos_ < b_.size() && std::isdigit(static_cast<unsigned char>(b_[pos_]))) {
            v = v * 10 + static_cast<unsigned long>(b_[pos_] - '0');
            if (v > 0xFFFFFFFFUL) fail(ErrorKind::Data, std::string("PGM ") + what + " overflows");
            ++pos_;
        }
        if (pos_ == start) {
            if (pos_ >= b_.size())
                fail(ErrorKind::Data, std::string(header ? "malformed PGM header" : "truncated PGM data") +
                                          ": missing " + what + " at byte offset " +
                                          std::to_string(pos_));
            fail(ErrorKind::Data, std::string(header ? "malformed PGM header" : "malformed PGM data") +
                                      ": expected " + what + " at byte offset " +
                                      std::to_string(pos_));
        }
        return v;
    }

    std::size_t pos_ = 0;
    std::string_view b_;
};

}  // namespace

GrayImage parse_pgm(std::string_view bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5'))
        fail(ErrorKind::Data, "malformed PGM header: expected magic 'P2' or 'P5' at byte offset 0");
    const bool binary = bytes[1] == '5';
    PgmReader r(bytes);
    r.pos_ = 2;

    GrayImage img;
    img.width = r.number("width", true);
    img.height = r.number("height", true);
    const unsigned long maxval = r.number("maxval", true);
    if (img.width == 0 || img.height == 0)
        fail(ErrorKind::Data, "malformed PGM header: zero image dimension");
    if (maxval == 0 || maxval > 65535)
        fail(ErrorKind::Data, "malformed PGM header: maxval must be in 1..65535");
    img.maxval = static_cast<unsigned>(maxval);

    const std::size_t count = img.width * img.height;
    img.pixels.resize(count);
    if (binary) {
        if (r.pos_ >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[r.pos_])))
            fail(ErrorKind::Data, "malformed PGM header: no separator after maxval at byte offset " +
                                      std::to_string(r.pos_));
        std::size_t pos = r.pos_ + 1;
        const std::size_t bpp = img.maxval < 256 ? 1 : 2;
        if (bytes.size() < pos + count * bpp)
            fail(ErrorKind::Data, "truncated PGM data: expected " + std::to_string(count * bpp) +
                                      " pixel bytes from byte offset " + std::to_string(pos) +
                                      ", file ends at byte offset " + std::to_string(bytes.size()));
        for (std::size_t i = 0; i < count; ++i) {
            unsigned v = static_cast<unsigned char>(bytes[pos++]);
            if (bpp == 2) v = (v << 8) | static_cast<unsigned char>(bytes[pos++]);
            img.pixels[i] = v;
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            const auto v = r.number("pixel value", false);
            img.pixels[i] = static_cast<unsigned>(v);
        }
    }
    for (unsigned v : img.pixels)
        if (v > img.maxval) fail(ErrorKind::Data, "PGM pixel value exceeds maxval");
    return img;
}

GrayImage load_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Data, "cannot open image '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_pgm(ss.str());
    } catch (const Error& e) {
        throw Error(e.kind(), path.string() + ": " + e.what());
    }
}

std::string to_pgm(const GrayImage& image, bool binary) {
    std::string out = std::string(binary ? "P5" : "P2") + "\n" + std::to_string(image.width) + " " +
                      std::to_string(image.height) + "\n" + std::to_string(image.maxval) + "\n";
    if (binary) {
        for (unsigned v : image.pixels) {
            if (image.maxval >= 256) out += static_cast<char>((v >> 8) & 0xFF);
            out += static_cast<char>(v & 0xFF);
        }
    } else {
        for (std::size_t row = 0; row < image.height; ++row) {
            for (std::size_t col = 0; col < image.width; ++col) {
                if (col) out += ' ';
                out += std::to_string(image.at(col, row));
            }
            out += '\n';
        }
    }
    return out;
}

PointCloud sample_intensity(const GrayImage& image, std::size_t n, bool darkness,
                            std::uint64_t seed) {
    if (n == 0) fail(ErrorKind::InvalidArgument, "sample count must be positive");
    std::vector<std::uint64_t> cumulative(image.pixels.size());
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < image.pixels.size(); ++i) {
        total += darkness ? image.maxval - image.pixels[i] : image.pixels[i];
        cumulative[i] = total;
    }
    if (total == 0)
        fail(ErrorKind::Data, "image has no pixel with nonzero sampling weight");

    Rng rng(seed, darkness ? "image/dark" : "image/bright");
    std::vector<double> coords;
    coords.reserve(2 * n);
    for (std::size_t s = 0; s < n; ++s) {
        const std::uint64_t u = rng.below(total);
        const auto idx = static_cast<std::size_t>(
            std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
        const std::size_t col = idx % image.width;
        const std::size_t row = idx / image.width;
        coords.push_back(static_cast<double>(col) + rng.uniform());
        coords.push_back(static_cast<double>(image.height - 1 - row) + rng.uniform());
    }
    return PointCloud(2, std::move(coords));
}

PointCloud sample_boundary(const GrayImage& image, std::size_t n, std::uint64_t seed) {
    if (n == 0) fail(ErrorKind::InvalidArgument, "sample count must be positive");
    const double w = static_cast<double>(image.width);
    const double h = static_cast<double>(image.height);
    const double perimeter = 2.0 * (w + h);
    Rng rng(seed, "image/boundary");
    std::vector<double> coords;
    coords.reserve(2 * n);
    for (std::size_t s = 0; s < n; ++s) {
        double t = rng.uniform() * perimeter;
        double x = 0.0, y = 0.0;
        if (t < w) {
            x = t;  // bottom
        } else if ((t -= w) < h) {
            x = w;  // right
            y = t;
        } else if ((t -= h) < w) {
            x = w - t;  // top
            y = h;
        } else {
            t -= w;  // left
            y = h - t;
        }
        coords.push_back(x);
        coords.push_back(y);
    }
    return PointCloud(2, std::move(coords));
}

GrayImage synthetic_honeycomb(std::uint64_t seed) {
    constexpr std::size_t kSize = 330;
    constexpr std::size_t kWall = 6;
    // Horizontal walls (rows) and, per band, the x-positions of vertical walls.
    constexpr std::size_t kRowWalls[] = {90, 200};
    constexpr std::size_t kBands[][2] = {{0, 90}, {90, 200}, {200, 330}};
    constexpr std::size_t kColWalls[][2] = {{80, 190}, {140, 240}, {100, 220}};

    GrayImage img;
    img.width = kSize;
    img.height = kSize;
    img.maxval = 255;
    img.pixels.assign(kSize * kSize, 255);

    auto paint = [&](std::size_t x0, std::size_t x1, std::size_t y0, std::size_t y1) {
        for (std::size_t y = y0; y < std::min(y1, kSize); ++y)
            for (std::size_t x = x0; x < std::min(x1, kSize); ++x) img.pixels[y * kSize + x] = 0;
    };
    for (std::size_t y : kRowWalls) paint(0, kSize, y - kWall / 2, y + kWall / 2);
    for (std::size_t b = 0; b < 3; ++b)
        for (std::size_t x : kColWalls[b]) paint(x - kWall / 2, x + kWall / 2, kBands[b][0], kBands[b][1]);

    // Speckle: walls lighten a little, cells receive sparse dark specks.
    Rng rng(seed, "honeycomb/speckle");
    for (auto& p : img.pixels) {
        if (p == 0)
            p = static_cast<unsigned>(rng.below(60));
        else if (rng.uniform() < 0.02)
            p = static_cast<unsigned>(rng.below(256));
    }
    return img;
}

}  // namespace pterrace
