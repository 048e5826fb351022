#include "sphseg/io.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace sphseg {
namespace {

constexpr std::uint32_t kMaxBandLimit = 8192;

void put_u32le(std::ostream& os, std::uint32_t v) {
    std::array<unsigned char, 4> b = {
        static_cast<unsigned char>(v & 0xff),
        static_cast<unsigned char>((v >> 8) & 0xff),
        static_cast<unsigned char>((v >> 16) & 0xff),
        static_cast<unsigned char>((v >> 24) & 0xff),
    };
    os.write(reinterpret_cast<const char*>(b.data()), 4);
}

std::uint32_t get_u32le(std::istream& is, const std::string& path) {
    std::array<unsigned char, 4> b{};
    if (!is.read(reinterpret_cast<char*>(b.data()), 4))
        throw io_error(path + ": truncated header");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint32_t checked_band_limit(std::uint32_t L, const std::string& path) {
    if (L == 0 || L > kMaxBandLimit)
        throw io_error(path + ": implausible band limit " + std::to_string(L));
    return L;
}

// Host doubles are IEEE-754 little-endian on every supported target; the
// containers store them verbatim.
static_assert(sizeof(double) == 8);

} // namespace

void write_sph(const SphericalImage& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw io_error(path + ": cannot open for writing");
    os.write("SPH1", 4);
    put_u32le(os, f.grid.L);
    os.write(reinterpret_cast<const char*>(f.values.data()),
             static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (!os)
        throw io_error(path + ": write failed");
}

void write_sph_text(const SphericalImage& f, const std::string& path) {
    std::ofstream os(path);
    if (!os)
        throw io_error(path + ": cannot open for writing");
    os << f.grid.L << "\n";
    char buf[40];
    for (std::uint32_t t = 0; t < f.grid.n_theta(); ++t) {
        for (std::uint32_t p = 0; p < f.grid.n_phi(); ++p) {
            std::snprintf(buf, sizeof buf, "%.17g", f.at(t, p));
            os << (p ? "," : "") << buf;
        }
        os << "\n";
    }
    if (!os)
        throw io_error(path + ": write failed");
}

SphericalImage read_sph(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw io_error(path + ": cannot open");
    char magic[4] = {};
    if (!is.read(magic, 4))
        throw io_error(path + ": file too short");

    if (std::memcmp(magic, "SPH1", 4) == 0) {
        const std::uint32_t L = checked_band_limit(get_u32le(is, path), path);
        EquiangularGrid grid(L);
        std::vector<double> values(grid.size());
        if (!is.read(reinterpret_cast<char*>(values.data()),
                     static_cast<std::streamsize>(values.size() * sizeof(double))))
            throw io_error(path + ": truncated sample data");
        char extra;
        if (is.read(&extra, 1))
            throw io_error(path + ": trailing bytes after sample data");
        return SphericalImage(grid, std::move(values));
    }

    // Text container: first line is the band limit.
    is.seekg(0);
    std::string line;
    if (!std::getline(is, line))
        throw io_error(path + ": empty file");
    std::uint32_t L = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), L);
    if (ec != std::errc() || ptr != line.data() + line.size())
        throw io_error(path + ": unrecognized container (bad magic and no text header)");
    checked_band_limit(L, path);

    EquiangularGrid grid(L);
    std::vector<double> values;
    values.reserve(grid.size());
    for (std::uint32_t t = 0; t < grid.n_theta(); ++t) {
        if (!std::getline(is, line))
            throw io_error(path + ": missing ring " + std::to_string(t));
        std::stringstream ss(line);
        std::string field;
        std::uint32_t p = 0;
        while (std::getline(ss, field, ',')) {
            try {
                values.push_back(std::stod(field));
            } catch (const std::exception&) {
                throw io_error(path + ": ring " + std::to_string(t) + ", field " +
                               std::to_string(p) + ": not a number");
            }
            ++p;
        }
        if (p != grid.n_phi())
            throw io_error(path + ": ring " + std::to_string(t) + " has " + std::to_string(p) +
                           " fields, expected " + std::to_string(grid.n_phi()));
    }
    return SphericalImage(grid, std::move(values));
}

void write_msk(const BinaryMask& m, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw io_error(path + ": cannot open for writing");
    os.write("MSK1", 4);
    put_u32le(os, m.grid.L);
    os.write(reinterpret_cast<const char*>(m.labels.data()),
             static_cast<std::streamsize>(m.labels.size()));
    if (!os)
        throw io_error(path + ": write failed");
}

BinaryMask read_msk(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw io_error(path + ": cannot open");
    char magic[4] = {};
    if (!is.read(magic, 4) || std::memcmp(magic, "MSK1", 4) != 0)
        throw io_error(path + ": not a MSK1 container");
    const std::uint32_t L = checked_band_limit(get_u32le(is, path), path);
    EquiangularGrid grid(L);
    std::vector<std::uint8_t> labels(grid.size());
    if (!is.read(reinterpret_cast<char*>(labels.data()),
                 static_cast<std::streamsize>(labels.size())))
        throw io_error(path + ": truncated label data");
    char extra;
    if (is.read(&extra, 1))
        throw io_error(path + ": trailing bytes after label data");
    for (std::uint8_t b : labels)
        if (b > 1)
            throw io_error(path + ": label byte outside {0,1}");
    return BinaryMask(grid, std::move(labels));
}

} // namespace sphseg
