#include "cli.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <stdexcept>
#include <utility>

#include <CLI11.hpp>
#include <unistd.h>

#include "specmerge/errors.hpp"
#include "specmerge/geometry.hpp"
#include "specmerge/json_format.hpp"
#include "specmerge/merge.hpp"
#include "specmerge/pgm.hpp"
#include "specmerge/sparse.hpp"
#include "specmerge/transform.hpp"
#include "specmerge/tuner_service.hpp"

namespace specmerge::cli {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open for reading");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError(path + ": read failed");
    return bytes;
}

ImagePlane load_pgm(const std::string& path) {
    const std::vector<std::uint8_t> bytes = read_file(path);
    try {
        return read_pgm(bytes);
    } catch (const std::exception& e) {
        throw IoError(path + ": " + e.what());
    }
}

std::vector<ImagePlane> load_all(const std::vector<std::string>& paths) {
    std::vector<ImagePlane> planes;
    planes.reserve(paths.size());
    for (const std::string& p : paths) planes.push_back(load_pgm(p));
    return planes;
}

// Collects outputs and publishes them only once every one of them has been
// written to a temporary sibling.
class OutputBatch {
public:
    OutputBatch() = default;
    OutputBatch(const OutputBatch&) = delete;
    OutputBatch& operator=(const OutputBatch&) = delete;

    ~OutputBatch() {
        std::error_code ignored;
        for (const auto& [temp, final_path] : staged_) fs::remove(temp, ignored);
    }

    void add(const std::string& path, const std::string& content) { pending_.emplace_back(path, content); }

    void add(const std::string& path, const std::vector<std::uint8_t>& content) {
        pending_.emplace_back(path, std::string(content.begin(), content.end()));
    }

    void commit() {
        for (const auto& [path, content] : pending_) {
            const fs::path final_path(path);
            fs::path temp = final_path;
            temp += ".tmp." + std::to_string(::getpid());
            {
                std::ofstream out(temp, std::ios::binary | std::ios::trunc);
                if (!out) throw IoError(path + ": cannot open for writing");
                staged_.emplace_back(temp, final_path);
                out.write(content.data(), static_cast<std::streamsize>(content.size()));
                out.flush();
                if (!out) throw IoError(path + ": write failed");
            }
        }
        for (const auto& [temp, final_path] : staged_) {
            std::error_code ec;
            fs::rename(temp, final_path, ec);
            if (ec) throw IoError(final_path.string() + ": " + ec.message());
        }
        staged_.clear();
    }

private:
    std::vector<std::pair<std::string, std::string>> pending_;
    std::vector<std::pair<fs::path, fs::path>> staged_;
};

struct MergeOptions {
    std::string mode;
    std::vector<double> coeffs;
    std::optional<double> threshold_frac;
    std::string renorm = "divide_by_max";
    std::string align = "center_pad";
    std::string output;
    std::string sparse;
    std::string report;
    unsigned threads = 1;
    std::vector<std::string> inputs;
};

struct ReduceOptions {
    double target_ratio = 1.0;
    std::vector<double> coeffs;
    std::string renorm = "divide_by_max";
    std::string align = "center_pad";
    std::string output;
    std::string sparse;
    std::string report;
    unsigned threads = 1;
    std::vector<std::string> inputs;
};

struct SpectrumOptions {
    bool shift = false;
    bool log = false;
    std::string output;
    std::string input;
    unsigned threads = 1;
};

struct GeometryOptions {
    std::size_t u = 0;
    std::size_t v = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    bool degrees = false;
};

struct ServeOptions {
    int port = 8080;
    std::string host = "127.0.0.1";
};

MergeConfig make_config(const std::vector<double>& coeffs, const std::string& renorm, const std::string& align,
                        std::size_t image_count) {
    MergeConfig config;
    const auto policy = renorm_from_name(renorm);
    if (!policy) throw UsageError("--renorm must be divide_by_max or clamp");
    config.renorm = *policy;
    const auto mode = align_mode_from_name(align);
    if (!mode) throw UsageError("--align must be center_pad or topleft_pad");
    config.alignment.mode = *mode;
    if (!coeffs.empty() && coeffs.size() != image_count) {
        throw UsageError("--coeffs lists " + std::to_string(coeffs.size()) + " values for " +
                         std::to_string(image_count) + " input images");
    }
    config.coefficients = coeffs;
    return config;
}

void add_merge_outputs(OutputBatch& batch, const SpectralMerge& result, const std::string& output,
                       const std::string& sparse, const std::string& report) {
    batch.add(output, write_pgm(result.merged));
    if (!sparse.empty()) batch.add(sparse, encode_fmg(result.sparse));
    if (!report.empty()) batch.add(report, report_to_json(result.report));
}

int run_merge(const MergeOptions& opt) {
    if (opt.mode != "spatial" && opt.mode != "spectral") throw UsageError("--mode must be spatial or spectral");
    const bool spectral = opt.mode == "spectral";
    if (!spectral) {
        if (!opt.coeffs.empty()) throw UsageError("--coeffs applies to --mode spectral only");
        if (opt.threshold_frac) throw UsageError("--threshold-frac applies to --mode spectral only");
        if (!opt.sparse.empty() || !opt.report.empty()) {
            throw UsageError("--sparse and --report apply to --mode spectral only");
        }
    }
    MergeConfig config = make_config(opt.coeffs, opt.renorm, opt.align, opt.inputs.size());
    config.threshold_fraction = opt.threshold_frac.value_or(0.0);
    if (!(config.threshold_fraction >= 0.0 && config.threshold_fraction < 1.0)) {
        throw UsageError("--threshold-frac must be in [0, 1)");
    }

    const std::vector<ImagePlane> planes = load_all(opt.inputs);
    OutputBatch batch;
    if (spectral) {
        const SpectralMerge result = merge_spectral(planes, config, Parallelism{opt.threads});
        add_merge_outputs(batch, result, opt.output, opt.sparse, opt.report);
    } else {
        batch.add(opt.output, write_pgm(merge_spatial(planes, config)));
    }
    batch.commit();
    return kExitOk;
}

int run_reduce(const ReduceOptions& opt) {
    if (!(opt.target_ratio >= 1.0)) throw UsageError("--target-ratio must be at least 1");
    const MergeConfig config = make_config(opt.coeffs, opt.renorm, opt.align, opt.inputs.size());
    const std::vector<ImagePlane> planes = load_all(opt.inputs);
    const SpectralMerge result = merge_spectral_to_ratio(planes, config, opt.target_ratio, Parallelism{opt.threads});
    OutputBatch batch;
    add_merge_outputs(batch, result, opt.output, opt.sparse, opt.report);
    batch.commit();
    return kExitOk;
}

int run_spectrum(const SpectrumOptions& opt) {
    const ImagePlane plane = load_pgm(opt.input);
    const ComplexSpectrum spectrum = forward2d(plane, Parallelism{opt.threads});
    OutputBatch batch;
    batch.add(opt.output, write_pgm(spectrum_heatmap(spectrum, {.center = opt.shift, .log_scale = opt.log})));
    batch.commit();
    return kExitOk;
}

int run_geometry(const GeometryOptions& opt, std::ostream& out) {
    std::optional<SpectralIndex> index;
    try {
        index.emplace(opt.u, opt.v, opt.rows, opt.cols);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    out << geometry_to_json(*index, wave_geometry(*index), opt.degrees);
    return kExitOk;
}

int run_serve(const ServeOptions& opt, std::ostream& err) {
    TunerService service;
    err << "specmerge tuner listening on http://" << opt.host << ":" << opt.port << "\n" << std::flush;
    if (!service.listen(opt.host, opt.port)) throw IoError("cannot listen on " + opt.host + ":" + std::to_string(opt.port));
    return kExitOk;
}

void add_merge_flags(CLI::App& cmd, std::vector<double>& coeffs, std::string& renorm, std::string& align,
                     unsigned& threads) {
    cmd.add_option("--coeffs", coeffs, "Prominence coefficients, one per input (default all 1)")->delimiter(',');
    cmd.add_option("--renorm", renorm, "divide_by_max or clamp")->capture_default_str();
    cmd.add_option("--align", align, "center_pad or topleft_pad")->capture_default_str();
    cmd.add_option("--threads", threads, "Worker threads for the transforms (0 = all cores)")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spatial and spectral image merging with spectral data reduction", "specmerge"};
    app.require_subcommand(1);

    MergeOptions merge;
    auto* merge_cmd = app.add_subcommand("merge", "Merge images in the spatial or frequency domain");
    merge_cmd->add_option("--mode", merge.mode, "spatial or spectral")->required();
    add_merge_flags(*merge_cmd, merge.coeffs, merge.renorm, merge.align, merge.threads);
    merge_cmd->add_option("--threshold-frac", merge.threshold_frac, "Drop coefficients below x * max |P|");
    merge_cmd->add_option("-o,--output", merge.output, "Merged PGM")->required();
    merge_cmd->add_option("--sparse", merge.sparse, "Write retained coefficients (FMG1)");
    merge_cmd->add_option("--report", merge.report, "Write reduction report (JSON)");
    merge_cmd->add_option("inputs", merge.inputs, "Input PGM files")->required();

    SpectrumOptions spectrum;
    auto* spectrum_cmd = app.add_subcommand("spectrum", "Render the magnitude spectrum of an image");
    spectrum_cmd->add_flag("--shift", spectrum.shift, "Center the DC coefficient");
    spectrum_cmd->add_flag("--log", spectrum.log, "Use log(1 + |I|)");
    spectrum_cmd->add_option("--threads", spectrum.threads, "Worker threads for the transform");
    spectrum_cmd->add_option("-o,--output", spectrum.output, "Heatmap PGM")->required();
    spectrum_cmd->add_option("input", spectrum.input, "Input PGM")->required();

    GeometryOptions geometry;
    auto* inspect_cmd = app.add_subcommand("inspect", "Inspect spectral metadata");
    inspect_cmd->require_subcommand(1);
    auto* geometry_cmd = inspect_cmd->add_subcommand("geometry", "Wavelengths, frequencies and direction of (u, v)");
    geometry_cmd->add_option("--u", geometry.u)->required();
    geometry_cmd->add_option("--v", geometry.v)->required();
    geometry_cmd->add_option("--rows", geometry.rows)->required();
    geometry_cmd->add_option("--cols", geometry.cols)->required();
    geometry_cmd->add_flag("--degrees", geometry.degrees, "Report theta_wf in degrees");

    ReduceOptions reduce;
    auto* reduce_cmd = app.add_subcommand("reduce", "Spectral merge thresholded to a target reduction ratio");
    reduce_cmd->add_option("--target-ratio", reduce.target_ratio, "total / retained coefficients")->required();
    add_merge_flags(*reduce_cmd, reduce.coeffs, reduce.renorm, reduce.align, reduce.threads);
    reduce_cmd->add_option("-o,--output", reduce.output, "Merged PGM")->required();
    reduce_cmd->add_option("--sparse", reduce.sparse, "Retained coefficients (FMG1)")->required();
    reduce_cmd->add_option("--report", reduce.report, "Reduction report (JSON)")->required();
    reduce_cmd->add_option("inputs", reduce.inputs, "Input PGM files")->required();

    ServeOptions serve;
    auto* serve_cmd = app.add_subcommand("serve", "Run the interactive tuning service");
    serve_cmd->add_option("--port", serve.port)->required();
    serve_cmd->add_option("--host", serve.host)->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "specmerge: " << e.what() << "\n" << "Run with --help for usage.\n";
        return kExitUsage;
    }

    try {
        if (merge_cmd->parsed()) return run_merge(merge);
        if (spectrum_cmd->parsed()) return run_spectrum(spectrum);
        if (geometry_cmd->parsed()) return run_geometry(geometry, out);
        if (reduce_cmd->parsed()) return run_reduce(reduce);
        if (serve_cmd->parsed()) return run_serve(serve, err);
    } catch (const UsageError& e) {
        err << "specmerge: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        err << "specmerge: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        err << "specmerge: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}

}  // namespace specmerge::cli
