// Copyright 2026 The hybrid-denoise Authors
// SPDX-License-Identifier: Apache-2.0

// hdn: synthesize, denoise, evaluate and benchmark frame sequences.

#include "hd/metrics.hpp"
#include "hd/parallel.hpp"
#include "hd/pipeline.hpp"
#include "hd/render.hpp"
#include "hd/scene.hpp"
#include "hd/sequence_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json read_json(const fs::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw hd::Error("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw hd::Error("'" + path.string() + "': " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw hd::Error("cannot write '" + path + "'");
    out << text;
}

// --- synth ------------------------------------------------------------------

struct SynthArgs {
    std::string scene = "shadow-objects";
    std::string movement = "static";
    int frames = 0;
    int width = 0;
    int height = 0;
    std::optional<float> roughness;
    std::optional<float> shadow_angle;
    hd::synth::SynthOptions options;
    std::string out;
};

int run_synth(const SynthArgs& a)
{
    hd::synth::SceneDescriptor scene;
    if (fs::exists(a.scene) && fs::is_regular_file(a.scene)) {
        scene = hd::synth::load_scene(a.scene);
        if (a.frames > 0)
            scene.frame_count = a.frames;
    } else {
        const auto movement = hd::synth::parse_movement(a.movement);
        if (!movement)
            throw hd::Error("unknown movement '" + a.movement + "' (static, camera, objects)");
        scene = hd::synth::scene_preset(a.scene, *movement, a.frames > 0 ? a.frames : 16);
    }
    if (a.width > 0)
        scene.width = a.width;
    if (a.height > 0)
        scene.height = a.height;
    if (a.roughness)
        hd::synth::override_roughness(scene, *a.roughness);
    if (a.shadow_angle)
        scene.shadow_angle_deg = *a.shadow_angle;
    if (const auto problems = hd::synth::validate(scene); !problems.empty())
        throw hd::Error("invalid scene: " + problems.front());

    const hd::FrameSequence seq = hd::synth::synthesize(scene, a.options);
    hd::save_sequence(seq, a.out);
    std::cerr << "wrote " << seq.frames.size() << " frames to " << a.out << "\n";
    return 0;
}

// --- config assembly shared by denoise and bench ---------------------------

struct ConfigArgs {
    std::string preset;
    std::string config;
    std::vector<std::string> sets;
};

hd::DenoiseConfig build_config(const ConfigArgs& a)
{
    hd::DenoiseConfig c = a.preset.empty() ? hd::DenoiseConfig{} : hd::preset(a.preset);
    if (!a.config.empty())
        hd::apply_json(c, read_json(a.config));
    for (const std::string& s : a.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0)
            throw hd::Error("--set expects key=value, got '" + s + "'");
        const std::string key = s.substr(0, eq);
        const std::string text = s.substr(eq + 1);
        json value;
        try {
            value = json::parse(text);
        } catch (const json::exception&) {
            value = text; // bare strings such as rectify_mode=clip
        }
        hd::apply_json(c, json{{key, value}});
    }
    if (const auto problems = hd::validate(c); !problems.empty())
        throw hd::Error("invalid config: " + problems.front());
    return c;
}

hd::ChannelSelection parse_channels(const std::string& s)
{
    if (s == "all")
        return {true, true};
    if (s == "shadow")
        return {true, false};
    if (s == "specular")
        return {false, true};
    if (s == "none")
        return {false, false};
    throw hd::Error("unknown channel selection '" + s + "' (all, shadow, specular, none)");
}

// --- denoise ----------------------------------------------------------------

struct DenoiseArgs {
    std::string in;
    std::string out;
    ConfigArgs config;
    std::string channels = "all";
    bool dump = false;
    bool trace = false;
};

int run_denoise(const DenoiseArgs& a)
{
    const hd::DenoiseConfig config = build_config(a.config);
    const hd::FrameSequence seq = hd::load_sequence(a.in);
    hd::PipelineOptions opt;
    opt.channels = parse_channels(a.channels);
    opt.dump_intermediates = a.dump;
    hd::PipelineResult r = hd::run_pipeline(seq, config, opt);
    if (!a.config.preset.empty())
        r.output.manifest.extra["preset"] = a.config.preset;
    hd::save_sequence(r.output, a.out);
    if (!r.report.is_null())
        write_text((fs::path(a.out) / "report.json").string(), r.report.dump(2) + "\n");
    if (a.trace)
        for (const auto& e : r.trace)
            std::cout << hd::describe(e) << "\n";
    return 0;
}

// --- eval -------------------------------------------------------------------

struct EvalArgs {
    std::string a;
    std::string b;
    std::string channel_a = "final";
    std::string channel_b = "reference";
    std::string format = "json";
    std::string out;
    std::string stack;
    std::string parameter;
    double value = 0.0;
    std::string movement;
};

std::string stack_label(const hd::Manifest& m)
{
    if (m.extra.contains("preset") && m.extra["preset"].is_string())
        return m.extra["preset"].get<std::string>();
    return m.extra.contains("config") ? "custom" : "input";
}

int run_eval(const EvalArgs& a)
{
    if (a.format != "json" && a.format != "csv")
        throw hd::Error("--report must be json or csv");
    const hd::FrameSequence sa = hd::load_sequence(a.a);
    const hd::FrameSequence sb = hd::load_sequence(a.b);
    if (sa.frames.size() != sb.frames.size())
        throw hd::Error("sequences have different frame counts");

    std::vector<hd::metrics::Record> records;
    double sum_ssim = 0.0, sum_mse = 0.0;
    for (std::size_t f = 0; f < sa.frames.size(); ++f) {
        const auto ia = sa.frames[f].find(a.channel_a);
        const auto ib = sb.frames[f].find(a.channel_b);
        if (ia == sa.frames[f].end())
            throw hd::Error("--a frame " + std::to_string(f) + " has no channel '" + a.channel_a + "'");
        if (ib == sb.frames[f].end())
            throw hd::Error("--b frame " + std::to_string(f) + " has no channel '" + a.channel_b + "'");
        hd::metrics::Record r;
        r.scene = sa.manifest.scene.value("name", std::string("unknown"));
        r.stack = a.stack.empty() ? stack_label(sa.manifest) : a.stack;
        r.parameter = a.parameter;
        r.value = a.value;
        r.movement = a.movement;
        r.frame = static_cast<int>(f);
        r.ssim = hd::metrics::ssim(ia->second, ib->second);
        r.mse = hd::metrics::mse(ia->second, ib->second);
        sum_ssim += r.ssim;
        sum_mse += r.mse;
        records.push_back(r);
    }
    if (!records.empty()) {
        hd::metrics::Record mean = records.front();
        mean.frame = -1;
        mean.ssim = sum_ssim / static_cast<double>(records.size());
        mean.mse = sum_mse / static_cast<double>(records.size());
        records.push_back(mean);
    }
    write_text(a.out, a.format == "json" ? hd::metrics::report_json(records).dump(2) + "\n"
                                         : hd::metrics::report_csv(records));
    return 0;
}

// --- bench ------------------------------------------------------------------

struct BenchArgs {
    std::string in;
    ConfigArgs config;
    int reps = 5;
    std::string out;
};

json summary_json(const hd::metrics::TimingSummary& s)
{
    return {{"min_ms", s.min * 1e3}, {"avg_ms", s.avg * 1e3}, {"max_ms", s.max * 1e3}, {"samples", s.samples}};
}

int run_bench(const BenchArgs& a)
{
    const hd::DenoiseConfig config = build_config(a.config);
    const hd::FrameSequence seq = hd::load_sequence(a.in);
    hd::check_sequence(seq);
    const hd::EnvMap env = seq.env_map.empty() ? hd::EnvMap{} : hd::EnvMap(seq.env_map);
    const auto contexts = hd::frame_contexts(seq, env);

    // Per pass / per spatial iteration wall times over all timed repetitions.
    std::map<std::string, std::vector<double>> passes;
    std::map<std::string, std::vector<double>> iterations;
    std::map<std::string, std::uint64_t> taps;
    bool warm_up = true;

    const auto result = hd::metrics::bench_pass(
        [&]() -> std::uint64_t {
            hd::Denoiser d(config);
            for (std::size_t f = 0; f < seq.frames.size(); ++f)
                d.process(seq.frames[f], contexts[f]);
            std::uint64_t total = 0;
            std::map<std::string, std::uint64_t> rep_taps;
            for (const auto& st : d.spatial_timings())
                for (const auto& it : st.iterations) {
                    const std::string key = std::string(hd::to_string(st.channel)) + "/" + std::to_string(it.iteration);
                    rep_taps[key] += it.stats.taps;
                    total += it.stats.taps;
                    if (!warm_up)
                        iterations[key].push_back(it.stats.seconds / static_cast<double>(seq.frames.size()));
                }
            if (!warm_up) {
                std::map<std::string, double> per_pass;
                for (const auto& t : d.timings()) {
                    std::string key(hd::to_string(t.pass));
                    if (t.channel)
                        key += "/" + std::string(hd::to_string(*t.channel));
                    per_pass[key] += t.seconds / static_cast<double>(seq.frames.size());
                }
                for (const auto& [k, v] : per_pass)
                    passes[k].push_back(v);
            }
            taps = rep_taps;
            warm_up = false;
            return total;
        },
        a.reps);

    json report;
    report["frames"] = seq.frames.size();
    report["width"] = seq.manifest.width;
    report["height"] = seq.manifest.height;
    report["repetitions"] = a.reps;
    report["workers"] = hd::worker_count();
    report["config"] = hd::to_json(config);
    report["sequence"] = summary_json(result.seconds);
    report["taps_total"] = result.taps;
    json jp = json::object();
    for (const auto& [k, v] : passes)
        jp[k] = summary_json(hd::metrics::summarize(v));
    report["per_frame_pass"] = jp;
    json ji = json::object();
    for (const auto& [k, v] : iterations) {
        json row = summary_json(hd::metrics::summarize(v));
        row["taps"] = taps[k];
        ji[k] = row;
    }
    report["per_frame_spatial_iteration"] = ji;
    write_text(a.out, report.dump(2) + "\n");
    return 0;
}

void add_config_options(CLI::App* cmd, ConfigArgs& c)
{
    cmd->add_option("--preset", c.preset, "Technique stack preset")
        ->check(CLI::IsMember(hd::preset_names()));
    cmd->add_option("--config", c.config, "JSON config file (applied over the preset)")->check(CLI::ExistingFile);
    cmd->add_option("--set", c.sets, "Override one config field, key=value (repeatable)");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hybrid-rendering denoiser: synthesize, denoise, evaluate and benchmark frame sequences"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

    SynthArgs synth;
    auto* s = app.add_subcommand("synth", "Render a noisy 1spp sequence with G-buffer (and optional references)");
    s->add_option("--scene", synth.scene, "Scene preset name or scene JSON file");
    s->add_option("--movement", synth.movement, "Preset animation: static, camera or objects");
    s->add_option("--frames", synth.frames, "Frame count (overrides the scene)")->check(CLI::PositiveNumber);
    s->add_option("--spp", synth.options.spp, "Samples per pixel of the noisy channels")->check(CLI::PositiveNumber);
    s->add_option("--seed", synth.options.seed, "Random seed");
    s->add_option("--width", synth.width, "Image width")->check(CLI::PositiveNumber);
    s->add_option("--height", synth.height, "Image height")->check(CLI::PositiveNumber);
    s->add_option("--roughness", synth.roughness, "Override every material roughness")->check(CLI::Range(0.f, 1.f));
    s->add_option("--shadow-angle", synth.shadow_angle, "Light cone apex angle in degrees")
        ->check(CLI::Range(0.f, 179.f));
    s->add_flag("--reference", synth.options.reference, "Also render 1024spp reference channels");
    s->add_flag("--ibl-secondary", synth.options.ibl_secondary, "Shade secondary hits from the prefiltered sky");
    s->add_option("--firefly-rate", synth.options.firefly_rate, "Per-pixel firefly probability in the specular input")
        ->check(CLI::Range(0.f, 1.f));
    s->add_option("--firefly-magnitude", synth.options.firefly_magnitude, "Value added by a firefly")
        ->check(CLI::NonNegativeNumber);
    s->add_option("--out", synth.out, "Output sequence directory")->required();

    DenoiseArgs den;
    auto* d = app.add_subcommand("denoise", "Run the denoising pipeline over a sequence");
    d->add_option("--in", den.in, "Input sequence directory")->required()->check(CLI::ExistingDirectory);
    add_config_options(d, den.config);
    d->add_option("--channels", den.channels, "Channels to denoise: all, shadow, specular or none");
    d->add_flag("--dump-intermediates", den.dump, "Also write per-stage buffers");
    d->add_flag("--trace", den.trace, "Print the executed pass sequence");
    d->add_option("--out", den.out, "Output sequence directory")->required();

    EvalArgs ev;
    auto* e = app.add_subcommand("eval", "Compare one channel of two sequences with SSIM and MSE");
    e->add_option("--a", ev.a, "First sequence")->required()->check(CLI::ExistingDirectory);
    e->add_option("--b", ev.b, "Second sequence")->required()->check(CLI::ExistingDirectory);
    e->add_option("--channel-a", ev.channel_a, "Channel of --a");
    e->add_option("--channel-b", ev.channel_b, "Channel of --b");
    e->add_option("--report", ev.format, "Report format: json or csv");
    e->add_option("--out", ev.out, "Report file (default stdout)");
    e->add_option("--stack", ev.stack, "Technique stack label (default from --a)");
    e->add_option("--parameter", ev.parameter, "Swept parameter name for the report key");
    e->add_option("--value", ev.value, "Swept parameter value");
    e->add_option("--movement", ev.movement, "Movement label for the report key");

    BenchArgs be;
    auto* b = app.add_subcommand("bench", "Time the pipeline passes over a sequence");
    b->add_option("--in", be.in, "Input sequence directory")->required()->check(CLI::ExistingDirectory);
    add_config_options(b, be.config);
    b->add_option("--reps", be.reps, "Timed repetitions (>= 3)")->check(CLI::Range(3, 1000));
    b->add_option("--report", be.out, "JSON report file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        hd::set_worker_count(threads);
        if (s->parsed())
            return run_synth(synth);
        if (d->parsed())
            return run_denoise(den);
        if (e->parsed())
            return run_eval(ev);
        if (b->parsed())
            return run_bench(be);
    } catch (const std::exception& ex) {
        std::cerr << "hdn: error: " << ex.what() << "\n";
        return 1;
    }
    return 2;
}
