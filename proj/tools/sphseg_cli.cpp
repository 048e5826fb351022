#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sphseg/errors.hpp"
#include "sphseg/harmonic.hpp"
#include "sphseg/io.hpp"
#include "sphseg/mollweide.hpp"
#include "sphseg/ops.hpp"
#include "sphseg/segmentation.hpp"
#include "sphseg/synthdata.hpp"
#include "sphseg/tiling.hpp"
#include "sphseg/transform.hpp"

namespace {

using namespace sphseg;

SphericalImage random_band_limited(std::uint32_t L, std::uint64_t seed) {
    const EquiangularGrid grid(L);
    SphericalImage f(grid);
    std::mt19937_64 eng(seed);
    for (double& v : f.values)
        v = (static_cast<double>(eng() >> 11) + 0.5) * 0x1p-53;
    return band_limit_image(f, L);
}

double max_abs_diff(const SphericalImage& a, const SphericalImage& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
    return worst;
}

bool file_has_magic(const std::string& path, const char* magic) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("cannot open '" + path + "'");
    char head[4] = {};
    is.read(head, 4);
    return is.gcount() == 4 && std::equal(head, head + 4, magic);
}

struct SynthArgs {
    std::string spec_path;
    std::uint32_t L = 64;
    std::string out_image;
    std::string out_truth;
};

struct NoiseArgs {
    std::string in_path;
    double snr_db = 30.0;
    std::uint64_t seed = 0;
    std::string out_path;
};

struct SegmentArgs {
    std::string in_path;
    std::string method = "wssa-a";
    std::string out_mask;
    std::string report_path;
    std::uint32_t L = 0;
    WssaConfig cfg;
};

struct RoundtripArgs {
    std::uint32_t L = 32;
    std::string family = "axisym";
    double B = 2.0;
    int j_min = 2;
    std::uint32_t N = 3;
    std::uint32_t L_trans = 0;
    std::uint64_t seed = 1;
    std::string dump_tiling;
};

struct PlotArgs {
    std::string in_path;
    std::string out_path;
    std::uint32_t width = 512;
};

struct ReportArgs {
    std::vector<std::string> csv_paths;
    std::string out_path;
};

int run_synth(const SynthArgs& a) {
    const PhantomSpec spec = load_phantom_spec(a.spec_path);
    const Phantom ph = make_phantom(spec, a.L);
    write_sph(ph.image, a.out_image);
    write_msk(ph.truth, a.out_truth);
    std::cout << "wrote " << a.out_image << " and " << a.out_truth << "\n";
    return 0;
}

int run_noise(const NoiseArgs& a) {
    const SphericalImage f = read_sph(a.in_path);
    write_sph(add_noise(f, a.snr_db, a.seed), a.out_path);
    std::cout << "wrote " << a.out_path << "\n";
    return 0;
}

int run_segment(const SegmentArgs& a) {
    SphericalImage f = read_sph(a.in_path);
    if (a.L != 0) {
        if (a.L > f.grid.L)
            throw invalid_parameter("requested band limit exceeds the image band limit");
        if (a.L < f.grid.L) {
            // Truncate the spectrum and resample on the coarser grid the
            // reduced band limit calls for.
            const HarmonicCoeffs full = sht_forward(f);
            HarmonicCoeffs cut(a.L, full.real_signal);
            for (std::uint32_t l = 0; l < a.L; ++l)
                for (std::int32_t m = -static_cast<std::int32_t>(l);
                     m <= static_cast<std::int32_t>(l); ++m)
                    cut.at(l, m) = full.at(l, m);
            f = sht_inverse(cut);
        }
    }

    BinaryMask mask(f.grid);
    SegReport rep;
    bool have_report = false;

    if (a.method == "kmeans") {
        mask = kmeans_mask(f);
        std::cout << "status=kmeans\n";
    } else {
        WssaConfig cfg = a.cfg;
        if (a.method == "wssa-a")
            cfg.family = SegFamily::axisymmetric;
        else if (a.method == "wssa-d")
            cfg.family = SegFamily::directional;
        else if (a.method == "wssa-h")
            cfg.family = SegFamily::hybrid;
        else
            throw invalid_parameter("unknown method '" + a.method + "'");
        rep = run_wssa(f, cfg);
        mask = rep.mask;
        have_report = true;
        std::cout << "status=" << to_string(rep.status)
                  << " iterations=" << rep.history.size() << "\n";
    }

    write_msk(mask, a.out_mask);
    if (!a.report_path.empty()) {
        std::ofstream os(a.report_path);
        if (!os) throw io_error("cannot open '" + a.report_path + "' for writing");
        if (have_report)
            write_history_csv(rep, os);
        else
            os << "iter,unclassified,a,b,ms\n";
        if (!os) throw io_error("failed while writing '" + a.report_path + "'");
    }
    return 0;
}

int run_roundtrip(const RoundtripArgs& a) {
    const SphericalImage f = random_band_limited(a.L, a.seed);
    SphericalImage back(f.grid);
    const auto dump = [&](const WaveletFamily& fam) {
        if (a.dump_tiling.empty()) return;
        std::ofstream os(a.dump_tiling);
        if (!os) throw io_error("cannot open '" + a.dump_tiling + "' for writing");
        write_tiling_csv(fam, os);
        if (!os) throw io_error("failed while writing '" + a.dump_tiling + "'");
    };

    if (a.family == "hybrid") {
        const std::uint32_t lt = a.L_trans ? a.L_trans : a.L / 2;
        const WaveletFamily curv = build_family(FamilyKind::curvelet, lt, a.B, a.j_min);
        const WaveletFamily dir =
            build_family(FamilyKind::directional, a.L, a.B, a.j_min, a.N);
        back = synthesise_hybrid(analyse_hybrid(f, curv, dir), curv, dir);
        dump(dir);
    } else {
        FamilyKind kind;
        std::uint32_t N = 1;
        if (a.family == "axisym") {
            kind = FamilyKind::axisymmetric;
        } else if (a.family == "directional") {
            kind = FamilyKind::directional;
            N = a.N;
        } else if (a.family == "curvelet") {
            kind = FamilyKind::curvelet;
        } else {
            throw invalid_parameter("unknown family '" + a.family + "'");
        }
        const WaveletFamily fam = build_family(kind, a.L, a.B, a.j_min, N);
        back = synthesise(analyse(f, fam), fam);
        dump(fam);
    }

    double scale = 0.0;
    for (double v : f.values) scale = std::max(scale, std::abs(v));
    const double err = max_abs_diff(f, back) / std::max(scale, 1e-300);
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", err);
    std::cout << buf << "\n";
    if (!(err <= 1e-8)) throw numeric_error("round-trip error above tolerance");
    return 0;
}

int run_plot(const PlotArgs& a) {
    if (a.width < 16) throw invalid_parameter("raster width must be at least 16");
    Raster r;
    if (file_has_magic(a.in_path, "MSK1"))
        r = mollweide_render(read_msk(a.in_path), a.width);
    else
        r = mollweide_render(read_sph(a.in_path), a.width);
    write_pgm(r, a.out_path);
    std::cout << "wrote " << a.out_path << "\n";
    return 0;
}

struct ReportColumn {
    std::string name;
    std::vector<std::string> unclassified;
    double total_ms = 0.0;
};

ReportColumn read_report_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw io_error("cannot open '" + path + "'");
    ReportColumn col;
    col.name = std::filesystem::path(path).stem().string();
    std::string line;
    if (!std::getline(is, line) || line.rfind("iter,unclassified,a,b,ms", 0) != 0)
        throw invalid_input("'" + path + "' is not an iteration report");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::istringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 5)
            throw invalid_input("'" + path + "' has a malformed row: " + line);
        col.unclassified.push_back(fields[1]);
        col.total_ms += std::stod(fields[4]);
    }
    return col;
}

int run_report(const ReportArgs& a) {
    std::vector<ReportColumn> cols;
    std::size_t rows = 0;
    for (const auto& p : a.csv_paths) {
        cols.push_back(read_report_csv(p));
        rows = std::max(rows, cols.back().unclassified.size());
    }

    std::ostringstream table;
    table << "iter";
    for (const auto& c : cols) table << "," << c.name;
    table << "\n";
    for (std::size_t i = 0; i < rows; ++i) {
        table << i;
        // Ragged columns are padded with "-".
        for (const auto& c : cols)
            table << "," << (i < c.unclassified.size() ? c.unclassified[i] : "-");
        table << "\n";
    }
    table << "time_s";
    char buf[48];
    for (const auto& c : cols) {
        std::snprintf(buf, sizeof(buf), "%.3f", c.total_ms / 1e3);
        table << "," << buf;
    }
    table << "\n";

    if (a.out_path.empty()) {
        std::cout << table.str();
    } else {
        std::ofstream os(a.out_path);
        if (!os) throw io_error("cannot open '" + a.out_path + "' for writing");
        os << table.str();
        if (!os) throw io_error("failed while writing '" + a.out_path + "'");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wavelet-based segmentation of images on the sphere"};
    app.require_subcommand(1);

    SynthArgs synth;
    auto* cmd_synth = app.add_subcommand("synth", "Render a phantom image and its truth mask");
    cmd_synth->add_option("spec", synth.spec_path, "Phantom spec file")->required();
    cmd_synth->add_option("--L", synth.L, "Band limit")->required();
    cmd_synth->add_option("--out", synth.out_image, "Output image (SPH1)")->required();
    cmd_synth->add_option("--truth", synth.out_truth, "Output truth mask (MSK1)")->required();

    NoiseArgs noise;
    auto* cmd_noise = app.add_subcommand("noise", "Add white Gaussian noise at a target SNR");
    cmd_noise->add_option("in", noise.in_path, "Input image")->required();
    cmd_noise->add_option("--snr", noise.snr_db, "SNR in dB")->required();
    cmd_noise->add_option("--seed", noise.seed, "RNG seed");
    cmd_noise->add_option("--out", noise.out_path, "Output image")->required();

    SegmentArgs seg;
    auto* cmd_segment = app.add_subcommand("segment", "Segment a spherical image");
    cmd_segment->add_option("in", seg.in_path, "Input image")->required();
    cmd_segment->add_option("--method", seg.method, "kmeans | wssa-a | wssa-d | wssa-h")
        ->required();
    cmd_segment->add_option("--out", seg.out_mask, "Output mask (MSK1)")->required();
    cmd_segment->add_option("--report", seg.report_path, "Iteration CSV");
    cmd_segment->add_option("--L", seg.L, "Band-limit the input before segmenting");
    cmd_segment->add_option("--eps", seg.cfg.epsilon, "Gradient threshold");
    cmd_segment->add_option("--lambda-bar", seg.cfg.lambda_bar, "Preprocess threshold");
    cmd_segment->add_option("--lambda", seg.cfg.lambda, "Iteration threshold");
    cmd_segment->add_option("--B", seg.cfg.B, "Dilation base");
    cmd_segment->add_option("--jmin", seg.cfg.j_min, "Coarsest wavelet scale");
    cmd_segment->add_option("--N", seg.cfg.N, "Azimuthal order count");
    cmd_segment->add_option("--ltrans", seg.cfg.L_trans, "Hybrid transition band limit");
    cmd_segment->add_option("--max-iter", seg.cfg.max_iter, "Iteration budget");
    cmd_segment->add_option("--trigger", seg.cfg.final_threshold_trigger,
                            "Final-threshold trigger size");
    cmd_segment->add_flag("--one-norm", seg.cfg.one_norm_gradient,
                          "Use the 1-norm gradient for the boundary set");

    RoundtripArgs rt;
    auto* cmd_roundtrip =
        app.add_subcommand("roundtrip", "Transform self-test on a random image");
    cmd_roundtrip->add_option("--L", rt.L, "Band limit")->required();
    cmd_roundtrip->add_option("--family", rt.family,
                              "axisym | directional | curvelet | hybrid")
        ->required();
    cmd_roundtrip->add_option("--B", rt.B, "Dilation base");
    cmd_roundtrip->add_option("--jmin", rt.j_min, "Coarsest wavelet scale");
    cmd_roundtrip->add_option("--N", rt.N, "Azimuthal order count");
    cmd_roundtrip->add_option("--ltrans", rt.L_trans, "Hybrid transition band limit");
    cmd_roundtrip->add_option("--seed", rt.seed, "RNG seed");
    cmd_roundtrip->add_option("--dump-tiling", rt.dump_tiling,
                              "Write the family tiling as CSV");

    PlotArgs plot;
    auto* cmd_plot = app.add_subcommand("plot", "Mollweide PGM rendering");
    cmd_plot->add_option("in", plot.in_path, "Input image or mask")->required();
    cmd_plot->add_option("--out", plot.out_path, "Output PGM")->required();
    cmd_plot->add_option("--width", plot.width, "Raster width in pixels");

    ReportArgs report;
    auto* cmd_report = app.add_subcommand("report", "Merge iteration CSVs into one table");
    cmd_report->add_option("csv", report.csv_paths, "Iteration CSV files")->required();
    cmd_report->add_option("--out", report.out_path, "Output table (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(cmd_synth)) return run_synth(synth);
        if (app.got_subcommand(cmd_noise)) return run_noise(noise);
        if (app.got_subcommand(cmd_segment)) return run_segment(seg);
        if (app.got_subcommand(cmd_roundtrip)) return run_roundtrip(rt);
        if (app.got_subcommand(cmd_plot)) return run_plot(plot);
        if (app.got_subcommand(cmd_report)) return run_report(report);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const numeric_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
