// stnstretch: batch time-scale modification with sines/transients/noise separation.
//
// Exit codes: 0 success, 1 usage or invalid argument, 2 file I/O, 3 noise backend, 4 internal error.

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "config_file.hpp"
#include "stn/cqt.hpp"
#include "stn/error.hpp"
#include "stn/logging.hpp"
#include "stn/loudness.hpp"
#include "stn/matrix_io.hpp"
#include "stn/metrics.hpp"
#include "stn/pipeline.hpp"
#include "stn/resample.hpp"
#include "stn/wav.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitBackend = 3;
constexpr int kExitInternal = 4;

constexpr int kWorkingRate = 44100;
constexpr const char* kSchemaVersion = "1";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StretchArgs {
    std::string input;
    std::string output;
    double alpha = 0.0;
    std::string backend = "spectral";
    std::optional<std::uint64_t> seed;
    std::string dump_dir;
    bool dump_masks = false;
    std::string events_csv;
    bool no_envelope = false;
    double target_lufs = -23.0;
    bool no_normalize = false;
    std::string config_file;
    int bits = 0;
    std::string neural_cmd;
    double neural_timeout_s = 1800.0;
    bool keep_request_dir = false;
};

struct MetricsArgs {
    std::string original;
    std::string stretched;
    double alpha = 1.0;
};

struct CqtArgs {
    std::string input;
    std::string output;
    bool log_compress = false;
};

template <typename T>
T parse_number(const std::string& key, const std::string& value)
{
    try {
        std::size_t used = 0;
        T out;
        if constexpr (std::is_floating_point_v<T>)
            out = static_cast<T>(std::stod(value, &used));
        else
            out = static_cast<T>(std::stoull(value, &used, 0));
        if (used != value.size()) throw std::invalid_argument(value);
        return out;
    } catch (const std::logic_error&) {
        throw UsageError("config: invalid value for " + key + ": '" + value + "'");
    }
}

bool parse_flag(const std::string& key, const std::string& value)
{
    const auto b = stnstretch::parse_bool(value);
    if (!b) throw UsageError("config: invalid boolean for " + key + ": '" + value + "'");
    return *b;
}

void apply_config_file(StretchArgs& args)
{
    if (args.config_file.empty()) return;
    if (!fs::is_regular_file(args.config_file)) throw stn::IoError("cannot read config file " + args.config_file);
    std::map<std::string, std::string> entries;
    try {
        entries = stnstretch::read_config_file(args.config_file);
    } catch (const std::runtime_error& e) {
        throw UsageError(e.what());
    }
    for (const auto& [key, value] : entries) {
        if (key == "alpha") args.alpha = parse_number<double>(key, value);
        else if (key == "backend") args.backend = value;
        else if (key == "seed") args.seed = parse_number<std::uint64_t>(key, value);
        else if (key == "target_lufs") args.target_lufs = parse_number<double>(key, value);
        else if (key == "normalize") args.no_normalize = !parse_flag(key, value);
        else if (key == "envelope") args.no_envelope = !parse_flag(key, value);
        else if (key == "bits") args.bits = parse_number<int>(key, value);
        else if (key == "neural_cmd") args.neural_cmd = value;
        else if (key == "neural_timeout_seconds") args.neural_timeout_s = parse_number<double>(key, value);
        else if (key == "keep_request_dir") args.keep_request_dir = parse_flag(key, value);
        else if (key == "events_csv") args.events_csv = value;
        else if (key == "dump_components") args.dump_dir = value;
        else if (key == "dump_masks") args.dump_masks = parse_flag(key, value);
        else throw UsageError("config: unknown key '" + key + "'");
    }
}

std::uint64_t resolve_seed(const StretchArgs& args)
{
    if (args.seed) return *args.seed;
    if (const char* env = std::getenv("STNSTRETCH_SEED"); env && *env) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used, 0);
            if (used == std::string(env).size()) return v;
        } catch (const std::logic_error&) {
        }
        throw UsageError(std::string("STNSTRETCH_SEED is not an unsigned integer: '") + env + "'");
    }
    return stn::TsmRequest{}.seed;
}

stn::Signal load_input(const std::string& path, stn::WavInfo& info)
{
    stn::Signal s = stn::read_wav(path, &info);
    if (s.sample_rate != kWorkingRate) {
        stn::log().warn("{}: resampling {} Hz to {} Hz", path, s.sample_rate, kWorkingRate);
        s = stn::resample(s, kWorkingRate);
    }
    return s;
}

double energy(const std::vector<double>& x)
{
    double e = 0.0;
    for (double v : x) e += v * v;
    return e;
}

void dump_masks(const stn::Signal& input, const stn::TsmConfig& config, const fs::path& dir)
{
    const auto& cfg = config.decomposition;
    for (std::size_t c = 0; c < input.num_channels(); ++c) {
        const auto x = input.channel(c);
        const auto spec1 = stn::stft(x, cfg.sines_stage.stft, input.sample_rate);
        const auto masks1 = stn::build_masks(spec1, cfg.sines_stage.masks);
        const auto split = stn::decompose_stage(x, input.sample_rate, cfg.sines_stage.stft, cfg.sines_stage.masks,
                                                stn::StageTarget::Sines);
        const auto spec2 = stn::stft(split.residual, cfg.transient_stage.stft, input.sample_rate);
        const auto masks2 = stn::build_masks(spec2, cfg.transient_stage.masks);
        const std::string suffix = input.num_channels() > 1 ? "_ch" + std::to_string(c) : "";
        stn::write_matrix(dir / ("mask_sines" + suffix + ".bin"), masks1.sines);
        stn::write_matrix(dir / ("mask_transients" + suffix + ".bin"), masks2.transients);
        stn::write_matrix(dir / ("mask_noise" + suffix + ".bin"), masks2.noise);
    }
}

int run_stretch(StretchArgs args)
{
    apply_config_file(args);
    if (!(args.alpha >= stn::kMinTsmAlpha && args.alpha <= stn::kMaxTsmAlpha))
        throw UsageError("--alpha must lie in [1, 16]");
    if (args.backend != "spectral" && args.backend != "neural")
        throw UsageError("--backend must be 'spectral' or 'neural'");
    if (args.bits != 0 && args.bits != 16 && args.bits != 24) throw UsageError("--bits must be 16 or 24");
    if (args.dump_masks && args.dump_dir.empty()) throw UsageError("--dump-masks requires --dump-components");
    if (!(args.neural_timeout_s > 0.0)) throw UsageError("neural timeout must be positive");

    stn::WavInfo info;
    const stn::Signal input = load_input(args.input, info);

    stn::TsmRequest request;
    request.input = input;
    request.alpha = args.alpha;
    request.seed = resolve_seed(args);
    request.config = stn::TsmConfig::defaults(input.sample_rate);
    request.config.envelope_enabled = !args.no_envelope;
    request.config.target_lufs = args.no_normalize ? std::nullopt : std::optional<double>(args.target_lufs);
    if (args.backend == "neural") {
        request.config.backend = stn::NoiseBackend::Neural;
        request.config.neural.command = args.neural_cmd;
        request.config.neural.timeout =
            std::chrono::milliseconds(static_cast<long long>(args.neural_timeout_s * 1000.0));
        request.config.neural.keep_request_dir = args.keep_request_dir;
    }

    const stn::TsmResult result = stn::tsm(request);
    const int bits = args.bits != 0 ? args.bits : (info.bits_per_sample == 24 ? 24 : 16);
    stn::write_wav(args.output, result.output, bits);

    if (!args.dump_dir.empty()) {
        const fs::path dir = args.dump_dir;
        fs::create_directories(dir);
        auto gather = [&](auto member) {
            std::vector<std::vector<double>> chans;
            for (const auto& trace : result.channels) chans.push_back(member(trace));
            return stn::Signal(input.sample_rate, std::move(chans));
        };
        stn::write_wav(dir / "sines.wav", gather([](const auto& t) { return t.components.sines; }), 24);
        stn::write_wav(dir / "transients.wav", gather([](const auto& t) { return t.components.transients; }), 24);
        stn::write_wav(dir / "noise.wav", gather([](const auto& t) { return t.components.noise; }), 24);
        stn::write_wav(dir / "sines_stretched.wav", gather([](const auto& t) { return t.sines; }), 24);
        stn::write_wav(dir / "transients_stretched.wav", gather([](const auto& t) { return t.transients; }), 24);
        stn::write_wav(dir / "noise_stretched.wav", gather([](const auto& t) { return t.noise; }), 24);
        if (args.dump_masks) dump_masks(input, request.config, dir);
    }

    if (!args.events_csv.empty()) {
        std::ofstream csv(args.events_csv);
        if (!csv) throw stn::IoError("cannot write " + args.events_csv);
        // Events of every channel share one file; the column set stays fixed.
        csv << "onset_seconds,peak_energy\n";
        for (const auto& trace : result.channels) {
            std::ostringstream body;
            stn::write_events_csv(body, trace.events, input.sample_rate);
            const std::string text = body.str();
            csv << text.substr(text.find('\n') + 1);
        }
        if (!csv) throw stn::IoError("cannot write " + args.events_csv);
    }

    double e_sines = 0.0, e_trans = 0.0, e_noise = 0.0;
    std::size_t events = 0;
    for (const auto& trace : result.channels) {
        e_sines += energy(trace.sines);
        e_trans += energy(trace.transients);
        e_noise += energy(trace.noise);
        events += trace.events.size();
    }
    const double e_total = e_sines + e_trans + e_noise;
    auto share = [&](double e) { return e_total > 0.0 ? e / e_total : 0.0; };

    json loudness = {{"target_lufs", request.config.target_lufs ? json(*request.config.target_lufs) : json(nullptr)}};
    loudness["before_lufs"] = result.loudness_before ? json(*result.loudness_before) : json(nullptr);
    loudness["gain_db"] = result.normalization_gain_db;
    try {
        loudness["output_lufs"] = stn::integrated_loudness(result.output);
    } catch (const stn::UnmeasurableLoudness&) {
        loudness["output_lufs"] = nullptr;
    }

    json summary = {
        {"schema", std::string("stnstretch.stretch/") + kSchemaVersion},
        {"input",
         {{"path", args.input},
          {"sample_rate", info.sample_rate},
          {"channels", input.num_channels()},
          {"length", input.length()}}},
        {"output",
         {{"path", args.output},
          {"sample_rate", result.output.sample_rate},
          {"bits", bits},
          {"length", result.output.length()}}},
        {"alpha", args.alpha},
        {"alpha_achieved", static_cast<double>(result.output.length()) / static_cast<double>(input.length())},
        {"backend", args.backend},
        {"seed", request.seed},
        {"envelope", !args.no_envelope},
        {"transient_events", events},
        {"energy_split", {{"sines", share(e_sines)}, {"transients", share(e_trans)}, {"noise", share(e_noise)}}},
        {"loudness", loudness},
    };
    std::cout << summary.dump(2) << "\n";
    return kExitOk;
}

json optional_number(const std::optional<double>& v)
{
    return v ? json(*v) : json(nullptr);
}

int run_metrics(const MetricsArgs& args)
{
    if (!(args.alpha > 0.0)) throw UsageError("--alpha must be positive");
    const stn::Signal original = stn::read_wav(args.original);
    const stn::Signal stretched = stn::read_wav(args.stretched);
    if (original.sample_rate != stretched.sample_rate)
        throw UsageError("sample rates differ: " + std::to_string(original.sample_rate) + " vs " +
                         std::to_string(stretched.sample_rate));
    const stn::MetricsReport r = stn::compare(original, stretched, args.alpha);
    json report = {
        {"schema", std::string("stnstretch.metrics/") + kSchemaVersion},
        {"alpha", args.alpha},
        {"sample_rate", original.sample_rate},
        {"length_original", original.length()},
        {"length_stretched", stretched.length()},
        {"length_ratio", r.length_ratio},
        {"spectrum",
         {{"bands", r.spectrum.bands},
          {"distance_db", r.spectrum.distance_db},
          {"max_deviation_db", r.spectrum.max_deviation_db},
          {"level_offset_db", r.spectrum.level_offset_db}}},
        {"onset_error_ms", {{"matched", r.onsets.matched}, {"mean", r.onsets.mean_ms}, {"max", r.onsets.max_ms}}},
        {"loudness_lufs",
         {{"original", optional_number(r.loudness_original)}, {"stretched", optional_number(r.loudness_stretched)}}},
    };
    std::cout << report.dump(2) << "\n";
    return kExitOk;
}

int run_cqt(const CqtArgs& args)
{
    stn::WavInfo info;
    const stn::Signal input = load_input(args.input, info);
    std::vector<double> mono(input.length(), 0.0);
    for (const auto& ch : input.channels)
        for (std::size_t i = 0; i < mono.size(); ++i) mono[i] += ch[i] / static_cast<double>(input.num_channels());

    stn::CqtFeatures features = stn::cqt(mono, input.sample_rate);
    if (args.log_compress) features = stn::compress_conditioning(features);
    stn::write_matrix(args.output, features.values);

    const auto& cfg = features.config;
    json sidecar = {
        {"schema", std::string("stnstretch.cqt/") + kSchemaVersion},
        {"source", args.input},
        {"sample_rate", input.sample_rate},
        {"hop", cfg.hop},
        {"f_min", cfg.f_min},
        {"f_max", cfg.resolved_f_max(input.sample_rate)},
        {"bins_per_octave", cfg.bins_per_octave},
        {"kernel_threshold", cfg.kernel_threshold},
        {"bins", features.values.rows()},
        {"frames", features.values.cols()},
        {"log_compressed", features.log_compressed},
        {"layout", "rows=bins cols=frames float32 little-endian"},
    };
    const std::string sidecar_path = args.output + ".json";
    std::ofstream out(sidecar_path);
    out << sidecar.dump(2) << "\n";
    if (!out) throw stn::IoError("cannot write " + sidecar_path);
    std::cout << sidecar.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Time-scale modification via sines/transients/noise decomposition"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "stnstretch 1.0");

    StretchArgs stretch;
    auto* s = app.add_subcommand("stretch", "Time-stretch a WAV file");
    s->add_option("input", stretch.input, "Input WAV")->required();
    s->add_option("output", stretch.output, "Output WAV")->required();
    s->add_option("-a,--alpha", stretch.alpha, "Stretch factor in [1, 16]");
    s->add_option("--backend", stretch.backend, "Noise backend: spectral or neural");
    s->add_option("--seed", stretch.seed, "Noise seed (fallback: STNSTRETCH_SEED)");
    s->add_option("--dump-components", stretch.dump_dir, "Write component WAVs into this directory");
    s->add_flag("--dump-masks", stretch.dump_masks, "Also write soft masks (needs --dump-components)");
    s->add_option("--events-csv", stretch.events_csv, "Write detected transient events as CSV");
    s->add_flag("--no-envelope", stretch.no_envelope, "Disable envelope shaping");
    s->add_option("--target-lufs", stretch.target_lufs, "Loudness normalization target");
    s->add_flag("--no-normalize", stretch.no_normalize, "Disable loudness normalization");
    s->add_option("--config", stretch.config_file, "key = value file; entries override flags");
    s->add_option("--bits", stretch.bits, "Output PCM bits (16 or 24; default follows input)");
    s->add_option("--neural-cmd", stretch.neural_cmd, "Neural synthesizer executable");
    s->add_option("--neural-timeout", stretch.neural_timeout_s, "Neural synthesizer timeout in seconds");
    s->add_flag("--keep-request-dir", stretch.keep_request_dir, "Keep neural request directories");

    MetricsArgs metrics;
    auto* m = app.add_subcommand("metrics", "Objective comparison of an original and a stretched file");
    m->add_option("original", metrics.original)->required();
    m->add_option("stretched", metrics.stretched)->required();
    m->add_option("-a,--alpha", metrics.alpha, "Stretch factor used");

    CqtArgs cqt;
    auto* c = app.add_subcommand("cqt", "Export CQT magnitudes as a binary matrix plus JSON sidecar");
    c->add_option("input", cqt.input)->required();
    c->add_option("output", cqt.output)->required();
    c->add_flag("--log", cqt.log_compress, "Apply conditioning log compression");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*s) return run_stretch(stretch);
        if (*m) return run_metrics(metrics);
        if (*c) return run_cqt(cqt);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const stn::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const stn::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const stn::BackendError& e) {
        std::cerr << "error: noise backend: " << e.what() << "\n";
        return kExitBackend;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
