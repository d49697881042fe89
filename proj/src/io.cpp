#include "shs/io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace shs {

namespace {

constexpr char kFgridMagic[4] = {'F', 'G', 'R', 'D'};
constexpr std::size_t kFgridHeaderBytes = 20;

std::vector<char> read_all(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open for reading: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        throw IoError("read failed: " + path.string());
    std::string s = std::move(buf).str();
    return {s.begin(), s.end()};
}

void write_all(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open for writing: " + path.string());
    out.write(bytes.data(), std::streamsize(bytes.size()));
    out.flush();
    if (!out)
        throw IoError("write failed: " + path.string());
}

std::uint32_t get_u32le(const char* p) {
    const auto* b = reinterpret_cast<const unsigned char*>(p);
    return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 |
           std::uint32_t(b[2]) << 16 | std::uint32_t(b[3]) << 24;
}

float get_f32le(const char* p) {
    std::uint32_t u = get_u32le(p);
    float f;
    std::memcpy(&f, &u, sizeof f);
    return f;
}

void put_u32le(std::string& out, std::uint32_t v) {
    out.push_back(char(v & 0xff));
    out.push_back(char((v >> 8) & 0xff));
    out.push_back(char((v >> 16) & 0xff));
    out.push_back(char((v >> 24) & 0xff));
}

void put_f32le(std::string& out, float f) {
    std::uint32_t u;
    std::memcpy(&u, &f, sizeof u);
    put_u32le(out, u);
}

ConfidenceGrid load_fgrid(const std::vector<char>& data, const std::filesystem::path& path) {
    if (data.size() < kFgridHeaderBytes)
        throw FormatError("truncated FGRID header: " + path.string());
    const std::uint32_t w = get_u32le(data.data() + 4);
    const std::uint32_t h = get_u32le(data.data() + 8);
    const float gsd = get_f32le(data.data() + 12);
    const float alt = get_f32le(data.data() + 16);
    if (w < 1 || h < 1 || !(gsd > 0.0f))
        throw FormatError("invalid FGRID header fields: " + path.string());
    const std::size_t expect = kFgridHeaderBytes + 4 * std::size_t(w) * h;
    if (data.size() != expect)
        throw FormatError("FGRID payload size mismatch: " + path.string());

    ConfidenceGrid grid;
    grid.meta.width = w;
    grid.meta.height = h;
    grid.meta.gsd_m = gsd;
    if (!std::isnan(alt))
        grid.meta.altitude_m = alt;
    grid.values.resize(std::size_t(w) * h);
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
        const float v = get_f32le(data.data() + kFgridHeaderBytes + 4 * i);
        if (!(v >= 0.0f && v <= 1.0f))
            throw RangeError("FGRID value outside [0,1]: " + path.string());
        grid.values[i] = v;
    }
    return grid;
}

// Reads one whitespace-delimited PNM header token, skipping '#' comments.
std::string pnm_token(const std::vector<char>& data, std::size_t& pos) {
    while (pos < data.size()) {
        char c = data[pos];
        if (c == '#') {
            while (pos < data.size() && data[pos] != '\n')
                ++pos;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++pos;
        } else {
            break;
        }
    }
    std::size_t start = pos;
    while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos])))
        ++pos;
    return {data.begin() + std::ptrdiff_t(start), data.begin() + std::ptrdiff_t(pos)};
}

struct PnmHeader {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::size_t payload_offset = 0;
};

PnmHeader parse_pnm_header(const std::vector<char>& data, const char* magic,
                           const std::filesystem::path& path) {
    std::size_t pos = 0;
    if (pnm_token(data, pos) != magic)
        throw FormatError(std::string("not a ") + magic + " file: " + path.string());
    PnmHeader h;
    try {
        h.width = std::uint32_t(std::stoul(pnm_token(data, pos)));
        h.height = std::uint32_t(std::stoul(pnm_token(data, pos)));
        const unsigned long maxval = std::stoul(pnm_token(data, pos));
        if (maxval != 255)
            throw FormatError("only maxval 255 supported: " + path.string());
    } catch (const std::logic_error&) {
        throw FormatError("malformed PNM header: " + path.string());
    }
    if (h.width < 1 || h.height < 1)
        throw FormatError("invalid PNM dimensions: " + path.string());
    if (pos >= data.size() || !std::isspace(static_cast<unsigned char>(data[pos])))
        throw FormatError("malformed PNM header: " + path.string());
    h.payload_offset = pos + 1;   // exactly one whitespace byte before payload
    return h;
}

} // namespace

ConfidenceGrid load_confidence_grid(const std::filesystem::path& path) {
    const auto data = read_all(path);
    if (data.size() >= 4 && std::memcmp(data.data(), kFgridMagic, 4) == 0)
        return load_fgrid(data, path);

    const PnmHeader h = parse_pnm_header(data, "P5", path);
    const std::size_t n = std::size_t(h.width) * h.height;
    if (data.size() - h.payload_offset != n)
        throw FormatError("PGM payload size mismatch: " + path.string());
    ConfidenceGrid grid;
    grid.meta.width = h.width;
    grid.meta.height = h.height;
    grid.meta.gsd_m = 1.0f;
    grid.values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        grid.values[i] = float(static_cast<unsigned char>(data[h.payload_offset + i])) / 255.0f;
    return grid;
}

void save_confidence_grid(const ConfidenceGrid& grid, const std::filesystem::path& path) {
    grid.meta.validate();
    if (grid.values.size() != grid.meta.pixel_count())
        throw ArgumentError("grid value count does not match dimensions");

    std::string out;
    if (path.extension() == ".pgm") {
        out = "P5\n" + std::to_string(grid.meta.width) + " " +
              std::to_string(grid.meta.height) + "\n255\n";
        out.reserve(out.size() + grid.values.size());
        for (float v : grid.values)
            out.push_back(char(static_cast<unsigned char>(std::lround(v * 255.0f))));
    } else {
        out.reserve(kFgridHeaderBytes + 4 * grid.values.size());
        out.append(kFgridMagic, 4);
        put_u32le(out, grid.meta.width);
        put_u32le(out, grid.meta.height);
        put_f32le(out, grid.meta.gsd_m);
        put_f32le(out, grid.meta.altitude_m ? *grid.meta.altitude_m
                                            : std::numeric_limits<float>::quiet_NaN());
        for (float v : grid.values)
            put_f32le(out, v);
    }
    write_all(path, out);
}

BinaryMask load_mask_pgm(const std::filesystem::path& path) {
    const auto data = read_all(path);
    const PnmHeader h = parse_pnm_header(data, "P5", path);
    const std::size_t n = std::size_t(h.width) * h.height;
    if (data.size() - h.payload_offset != n)
        throw FormatError("PGM payload size mismatch: " + path.string());
    BinaryMask mask;
    mask.meta.width = h.width;
    mask.meta.height = h.height;
    mask.meta.gsd_m = 1.0f;
    mask.bits.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto v = static_cast<unsigned char>(data[h.payload_offset + i]);
        if (v != 0 && v != 255)
            throw FormatError("mask PGM pixels must be 0 or 255: " + path.string());
        mask.bits[i] = v == 255 ? 1 : 0;
    }
    return mask;
}

void save_mask_pgm(const BinaryMask& mask, const std::filesystem::path& path) {
    std::string out = "P5\n" + std::to_string(mask.meta.width) + " " +
                      std::to_string(mask.meta.height) + "\n255\n";
    out.reserve(out.size() + mask.bits.size());
    for (std::uint8_t b : mask.bits)
        out.push_back(b ? char(255) : char(0));
    write_all(path, out);
}

RgbImage load_ppm(const std::filesystem::path& path) {
    const auto data = read_all(path);
    const PnmHeader h = parse_pnm_header(data, "P6", path);
    const std::size_t n = 3 * std::size_t(h.width) * h.height;
    if (data.size() - h.payload_offset != n)
        throw FormatError("PPM payload size mismatch: " + path.string());
    RgbImage img;
    img.meta.width = h.width;
    img.meta.height = h.height;
    img.meta.gsd_m = 1.0f;
    img.rgb.assign(reinterpret_cast<const std::uint8_t*>(data.data() + h.payload_offset),
                   reinterpret_cast<const std::uint8_t*>(data.data() + h.payload_offset + n));
    return img;
}

void save_ppm(const RgbImage& image, const std::filesystem::path& path) {
    if (image.rgb.size() != 3 * image.meta.pixel_count())
        throw ArgumentError("RGB buffer size does not match dimensions");
    std::string out = "P6\n" + std::to_string(image.meta.width) + " " +
                      std::to_string(image.meta.height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(image.rgb.data()), image.rgb.size());
    write_all(path, out);
}

} // namespace shs
