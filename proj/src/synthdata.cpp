#include "sphseg/synthdata.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "sphseg/errors.hpp"
#include "sphseg/harmonic.hpp"

namespace sphseg {

const char* to_string(PhantomKind k) {
    switch (k) {
    case PhantomKind::cap: return "cap";
    case PhantomKind::two_caps: return "two_caps";
    case PhantomKind::ridge_network: return "ridge_network";
    case PhantomKind::checker: return "checker";
    }
    return "unknown";
}

namespace {

std::array<double, 3> unit_vec(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
            std::cos(theta)};
}

double dot(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

void validate_spec(const PhantomSpec& spec) {
    if (!(spec.foreground >= 0.0 && spec.foreground <= 1.0) ||
        !(spec.background >= 0.0 && spec.background <= 1.0))
        throw invalid_parameter("phantom levels must lie in [0, 1]");
    switch (spec.kind) {
    case PhantomKind::cap:
        if (spec.caps.size() != 1) throw invalid_parameter("cap phantom needs one cap");
        break;
    case PhantomKind::two_caps:
        if (spec.caps.size() != 2)
            throw invalid_parameter("two_caps phantom needs two caps");
        break;
    case PhantomKind::ridge_network:
        if (spec.ridges.empty())
            throw invalid_parameter("ridge_network phantom needs at least one ridge");
        break;
    case PhantomKind::checker:
        if (spec.checker_bands < 1 || spec.checker_sectors < 1)
            throw invalid_parameter("checker phantom needs positive band/sector counts");
        break;
    }
    for (const auto& c : spec.caps)
        if (!(c.radius > 0.0 && c.radius < M_PI))
            throw invalid_parameter("cap radius must lie in (0, pi)");
    for (const auto& r : spec.ridges) {
        if (!(r.half_width > 0.0 && r.half_width < M_PI / 2))
            throw invalid_parameter("ridge half width must lie in (0, pi/2)");
        if (r.level > 1.0)
            throw invalid_parameter("ridge level must not exceed 1");
    }
}

bool inside(const PhantomSpec& spec, double theta, double phi) {
    const auto x = unit_vec(theta, phi);
    switch (spec.kind) {
    case PhantomKind::cap:
    case PhantomKind::two_caps:
        for (const auto& c : spec.caps) {
            const auto ctr = unit_vec(c.theta, c.phi);
            if (dot(x, ctr) >= std::cos(c.radius)) return true;
        }
        return false;
    case PhantomKind::ridge_network:
        for (const auto& r : spec.ridges) {
            const auto pole = unit_vec(r.pole_theta, r.pole_phi);
            if (std::abs(dot(x, pole)) <= std::sin(r.half_width)) return true;
        }
        return false;
    case PhantomKind::checker: {
        const std::uint32_t band = std::min<std::uint32_t>(
            static_cast<std::uint32_t>(theta / M_PI * spec.checker_bands),
            spec.checker_bands - 1);
        const std::uint32_t sector = std::min<std::uint32_t>(
            static_cast<std::uint32_t>(phi / (2.0 * M_PI) * spec.checker_sectors),
            spec.checker_sectors - 1);
        return (band + sector) % 2 == 0;
    }
    }
    return false;
}

// Intensity of the brightest band covering the point, negative if uncovered.
double ridge_level(const PhantomSpec& spec, double theta, double phi) {
    const auto x = unit_vec(theta, phi);
    double level = -1.0;
    for (const auto& r : spec.ridges) {
        const auto pole = unit_vec(r.pole_theta, r.pole_phi);
        if (std::abs(dot(x, pole)) <= std::sin(r.half_width))
            level = std::max(level, r.level < 0.0 ? spec.foreground : r.level);
    }
    return level;
}

} // namespace

Phantom make_phantom(const PhantomSpec& spec, std::uint32_t L) {
    validate_spec(spec);
    if (L < 2) throw invalid_parameter("band limit must be at least 2");

    const EquiangularGrid grid(L);
    Phantom ph{SphericalImage(grid), BinaryMask(grid)};
    for (std::uint32_t t = 0; t < grid.n_theta(); ++t) {
        const double theta = grid.theta(t);
        for (std::uint32_t p = 0; p < grid.n_phi(); ++p) {
            if (spec.kind == PhantomKind::ridge_network) {
                const double lv = ridge_level(spec, theta, grid.phi(p));
                ph.truth.at(t, p) = lv >= 0.0 ? 1 : 0;
                ph.image.at(t, p) = lv >= 0.0 ? lv : spec.background;
            } else {
                const bool in = inside(spec, theta, grid.phi(p));
                ph.truth.at(t, p) = in ? 1 : 0;
                ph.image.at(t, p) = in ? spec.foreground : spec.background;
            }
        }
    }

    const std::uint32_t smooth =
        spec.smoothing_L == 0 ? L : std::min(spec.smoothing_L, L);
    ph.image = band_limit_image(ph.image, smooth);
    for (double& v : ph.image.values) v = std::clamp(v, 0.0, 1.0);
    return ph;
}

namespace {

PhantomKind parse_kind(const std::string& word, int line_no) {
    if (word == "cap") return PhantomKind::cap;
    if (word == "two_caps") return PhantomKind::two_caps;
    if (word == "ridge_network") return PhantomKind::ridge_network;
    if (word == "checker") return PhantomKind::checker;
    throw invalid_input("phantom spec line " + std::to_string(line_no) +
                        ": unknown kind '" + word + "'");
}

double parse_double(std::istringstream& ss, const std::string& key, int line_no) {
    double v;
    if (!(ss >> v))
        throw invalid_input("phantom spec line " + std::to_string(line_no) +
                            ": expected a number after '" + key + "'");
    return v;
}

} // namespace

PhantomSpec parse_phantom_spec(std::istream& is) {
    PhantomSpec spec;
    spec.caps.clear();
    spec.ridges.clear();
    bool have_kind = false;

    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        std::string key = line.substr(0, eq == std::string::npos ? line.size() : eq);
        std::string rest = eq == std::string::npos ? "" : line.substr(eq + 1);
        std::istringstream ks(key);
        ks >> key;
        if (key.empty()) continue;
        std::istringstream ss(rest);

        if (key == "kind") {
            std::string word;
            if (!(ss >> word))
                throw invalid_input("phantom spec line " + std::to_string(line_no) +
                                    ": expected a kind name");
            spec.kind = parse_kind(word, line_no);
            have_kind = true;
        } else if (key == "cap") {
            CapGeometry c;
            c.theta = parse_double(ss, key, line_no);
            c.phi = parse_double(ss, key, line_no);
            c.radius = parse_double(ss, key, line_no);
            spec.caps.push_back(c);
        } else if (key == "ridge") {
            RidgeGeometry r;
            r.pole_theta = parse_double(ss, key, line_no);
            r.pole_phi = parse_double(ss, key, line_no);
            r.half_width = parse_double(ss, key, line_no);
            double lv;
            if (ss >> lv) r.level = lv;
            spec.ridges.push_back(r);
        } else if (key == "checker") {
            double bands = parse_double(ss, key, line_no);
            double sectors = parse_double(ss, key, line_no);
            if (bands < 1 || sectors < 1)
                throw invalid_input("phantom spec line " + std::to_string(line_no) +
                                    ": checker counts must be positive");
            spec.checker_bands = static_cast<std::uint32_t>(bands);
            spec.checker_sectors = static_cast<std::uint32_t>(sectors);
        } else if (key == "foreground") {
            spec.foreground = parse_double(ss, key, line_no);
        } else if (key == "background") {
            spec.background = parse_double(ss, key, line_no);
        } else if (key == "smooth") {
            const double v = parse_double(ss, key, line_no);
            if (v < 0)
                throw invalid_input("phantom spec line " + std::to_string(line_no) +
                                    ": smooth must be non-negative");
            spec.smoothing_L = static_cast<std::uint32_t>(v);
        } else {
            throw invalid_input("phantom spec line " + std::to_string(line_no) +
                                ": unknown key '" + key + "'");
        }
    }
    if (!have_kind) throw invalid_input("phantom spec is missing the kind entry");
    validate_spec(spec);
    return spec;
}

PhantomSpec load_phantom_spec(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw io_error("cannot open phantom spec '" + path + "'");
    return parse_phantom_spec(is);
}

void write_phantom_spec(const PhantomSpec& spec, std::ostream& os) {
    char buf[160];
    os << "kind = " << to_string(spec.kind) << "\n";
    for (const auto& c : spec.caps) {
        std::snprintf(buf, sizeof(buf), "cap = %.17g %.17g %.17g", c.theta, c.phi,
                      c.radius);
        os << buf << "\n";
    }
    for (const auto& r : spec.ridges) {
        if (r.level >= 0.0)
            std::snprintf(buf, sizeof(buf), "ridge = %.17g %.17g %.17g %.17g",
                          r.pole_theta, r.pole_phi, r.half_width, r.level);
        else
            std::snprintf(buf, sizeof(buf), "ridge = %.17g %.17g %.17g",
                          r.pole_theta, r.pole_phi, r.half_width);
        os << buf << "\n";
    }
    if (spec.kind == PhantomKind::checker)
        os << "checker = " << spec.checker_bands << " " << spec.checker_sectors << "\n";
    std::snprintf(buf, sizeof(buf), "foreground = %.17g", spec.foreground);
    os << buf << "\n";
    std::snprintf(buf, sizeof(buf), "background = %.17g", spec.background);
    os << buf << "\n";
    if (spec.smoothing_L) os << "smooth = " << spec.smoothing_L << "\n";
}

} // namespace sphseg
