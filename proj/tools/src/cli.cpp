#include "thsmooth_cli/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "thsmooth/thsmooth.hpp"

namespace thsmooth::cli {
namespace {

namespace fs = std::filesystem;

struct FlagDef {
    const char* key;
    const char* name;
    const char* help;
    bool is_flag = false;
};

// Every flag is the command-line spelling of one RunConfig key.
constexpr FlagDef kFlags[] = {
    {"input", "--in", "input image (or signal CSV for demo-1d)"},
    {"guide", "--guide", "guidance image"},
    {"output", "--out", "output path; the format follows the extension"},
    {"preset", "--preset", "parameter regime (see list below)"},
    {"lambda", "--lambda", "smoothness weight"},
    {"alpha", "--alpha", "guidance exponent"},
    {"a_d", "--a-d", "data-term Huber threshold"},
    {"b_d", "--b-d", "data-term truncation"},
    {"a_s", "--a-s", "smoothness Huber threshold"},
    {"b_s", "--b-s", "smoothness truncation"},
    {"delta", "--delta", "guidance offset"},
    {"epsilon", "--epsilon", "epsilon used for a = eps regimes"},
    {"b", "--b", "truncation b_d = b_s"},
    {"r", "--r", "neighborhood radius"},
    {"r_d", "--r-d", "data-term radius"},
    {"r_s", "--r-s", "smoothness radius"},
    {"n_iters", "--n", "outer iterations"},
    {"boost", "--boost", "detail boost factor"},
    {"scale", "--scale", "upsampling factor"},
    {"gt", "--gt", "ground-truth depth for scoring"},
    {"manifest", "--manifest", "benchmark manifest"},
    {"csv", "--csv", "CSV output path (stdout when omitted)"},
    {"fixture", "--fixture", "step_details, pulses or blurred_step"},
    {"seed", "--seed", "fixture or test-card seed"},
    {"size", "--size", "test-card size WxH"},
    {"repeat", "--repeat", "timed repetitions"},
    {"sweep", "--sweep", "time r = 1..5 instead of a single radius", true},
    {"bit_depth", "--bit-depth", "8 or 16 for integer outputs"},
    {"threads", "--threads", "worker threads (default: THSMOOTH_THREADS or all cores)"},
    {"preconditioner", "--preconditioner", "incomplete_cholesky or jacobi"},
    {"audit", "--audit", "write <stem>.energy.csv next to the output", true},
    {"gray_guide", "--gray-guide", "convert the guide to Rec. 601 luma", true},
};

const FlagDef& flag_for(std::string_view key) {
    for (const auto& f : kFlags) {
        if (key == f.key) return f;
    }
    throw std::logic_error("no flag for key " + std::string(key));
}

const std::vector<std::string> kCommon = {"threads", "preconditioner"};
const std::vector<std::string> kRaw = {"a_d", "b_d", "a_s", "b_s", "delta", "epsilon", "r_d", "r_s"};

struct Command {
    std::string name;
    std::string help;
    std::vector<std::string> keys;
};

std::vector<Command> commands() {
    return {
        {"smooth", "Smooth an image with a preset or raw parameters",
         {"input", "guide", "output", "preset", "lambda", "alpha", "a_d", "b_d", "a_s", "b_s",
          "delta", "epsilon", "b", "r", "r_d", "r_s", "n_iters", "bit_depth", "gray_guide",
          "audit"}},
        {"enhance", "Detail enhancement: base layer with group1_detail, boosted detail",
         {"input", "output", "lambda", "r", "boost", "bit_depth", "audit"}},
        {"clipart", "Compression-artifact removal with group2_sharpen",
         {"input", "output", "lambda", "b", "r", "bit_depth", "audit"}},
        {"upsample-depth", "Guided depth upsampling with group3_guided",
         {"input", "guide", "output", "gt", "scale", "lambda", "b", "r", "bit_depth", "gray_guide",
          "audit"}},
        {"texture", "Texture removal with group4_texture",
         {"input", "output", "lambda", "r", "bit_depth", "audit"}},
        {"demo-1d", "Smooth a 1-D fixture or signal CSV",
         {"fixture", "seed", "input", "output", "preset", "lambda", "b", "r", "n_iters", "audit"}},
        {"eval-mae", "Score guided upsampling over a benchmark manifest",
         {"manifest", "csv", "lambda", "b", "r", "gray_guide"}},
        {"bench", "Time smoothing of an RGB test card",
         {"input", "size", "seed", "lambda", "r", "n_iters", "sweep", "repeat"}},
    };
}

std::string preset_table() {
    std::ostringstream os;
    os << "Presets (defaults; b = 10 means untruncated):\n";
    for (const Preset p : all_presets()) {
        const SmoothingParams s = preset(p);
        os << "  " << preset_name(p) << ": lambda=" << s.lambda << " alpha=" << s.alpha
           << " a_d=" << s.a_d << " b_d=" << s.b_d << " a_s=" << s.a_s << " b_s=" << s.b_s
           << " r_d=" << s.r_d << " r_s=" << s.r_s << " N=" << s.n_iters << "\n";
    }
    os << "Task defaults: enhance lambda=20 r=2 boost=3; clipart lambda=1 b=0.2 r=1;\n"
          "  texture lambda=0.5 r=1; upsample-depth and eval-mae lambda=2.5 b=0.2 r=1;\n"
          "  demo-1d step_details group1_detail lambda=20 r=1, pulses group4_texture\n"
          "  lambda=20 r=1, blurred_step group2_sharpen lambda=500 b=0.15 r=1;\n"
          "  bench lambda=0.5 r=1 N=10 size=800x600 seed=1.\n"
          "Exit codes: 0 ok, 1 usage or parameter error, 2 runtime error.\n"
          "Environment: THSMOOTH_THREADS sets the default thread count.";
    return os.str();
}

// --- parameter resolution ---------------------------------------------------

std::optional<int> int_key(const RunConfig& cfg, std::string_view key) {
    if (!cfg.has(key)) return std::nullopt;
    return static_cast<int>(cfg.number_or(key, 0.0));
}

std::optional<double> num_key(const RunConfig& cfg, std::string_view key) {
    if (!cfg.has(key)) return std::nullopt;
    return cfg.number_or(key, 0.0);
}

PresetOverrides overrides_from(const RunConfig& cfg) {
    PresetOverrides o;
    o.lambda = num_key(cfg, "lambda");
    o.alpha = num_key(cfg, "alpha");
    o.radius = int_key(cfg, "r");
    o.b = num_key(cfg, "b");
    o.n_iters = int_key(cfg, "n_iters");
    return o;
}

SmoothingParams params_for(const RunConfig& cfg, Preset p) {
    for (const auto& k : kRaw) {
        if (cfg.has(k)) {
            throw ContractError(std::string(flag_for(k).name) + " cannot be combined with preset " +
                                std::string(preset_name(p)) + "; omit --preset to set raw parameters");
        }
    }
    return preset(p, overrides_from(cfg));
}

SmoothingParams raw_params(const RunConfig& cfg) {
    SmoothingParams s;
    s.lambda = cfg.number_or("lambda", s.lambda);
    s.alpha = cfg.number_or("alpha", s.alpha);
    s.delta = cfg.number_or("delta", s.delta);
    s.epsilon = cfg.number_or("epsilon", s.epsilon);
    if (cfg.has("b")) s.b_d = s.b_s = cfg.number_or("b", 0.0);
    s.a_d = cfg.number_or("a_d", s.a_d);
    s.b_d = cfg.number_or("b_d", s.b_d);
    s.a_s = cfg.number_or("a_s", s.a_s);
    s.b_s = cfg.number_or("b_s", s.b_s);
    if (cfg.has("r")) s.r_d = s.r_s = int_key(cfg, "r").value();
    s.r_d = int_key(cfg, "r_d").value_or(s.r_d);
    s.r_s = int_key(cfg, "r_s").value_or(s.r_s);
    s.n_iters = int_key(cfg, "n_iters").value_or(s.n_iters);
    require_valid(s);
    return s;
}

SmoothOptions smooth_options(const RunConfig& cfg) {
    SmoothOptions o;
    o.audit = cfg.flag_or("audit", false);
    const std::string pc = cfg.string_or("preconditioner", "incomplete_cholesky");
    if (pc == "incomplete_cholesky" || pc == "ic") {
        o.solver.preconditioner = Preconditioner::incomplete_cholesky;
    } else if (pc == "jacobi") {
        o.solver.preconditioner = Preconditioner::jacobi;
    } else {
        throw ContractError("unknown preconditioner: " + pc);
    }
    return o;
}

void apply_threads(const RunConfig& cfg) {
    if (cfg.has("threads")) {
        const int t = int_key(cfg, "threads").value();
        if (t < 1) throw ContractError("--threads must be >= 1");
        set_thread_count(t);
        return;
    }
    if (const char* env = std::getenv("THSMOOTH_THREADS"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const long t = std::strtol(env, &end, 10);
        if (*end != '\0' || t < 1) {
            throw ContractError("THSMOOTH_THREADS must be a positive integer");
        }
        set_thread_count(static_cast<int>(t));
        return;
    }
    set_thread_count(0);
}

// Task defaults for upsample-depth and eval-mae, from the synthetic benchmark.
RunConfig depth_defaults(const RunConfig& cfg) {
    RunConfig out = cfg;
    if (!cfg.has("lambda")) out.numbers["lambda"] = 2.5;
    if (!cfg.has("b")) out.numbers["b"] = 0.2;
    if (!cfg.has("r")) out.numbers["r"] = 1;
    return out;
}

// --- helpers -----------------------------------------------------------------

std::string required(const RunConfig& cfg, std::string_view key) {
    if (!cfg.has(key)) {
        throw ContractError(std::string(flag_for(key).name) + " is required");
    }
    return cfg.string_or(key, "");
}

int output_depth(const RunConfig& cfg, const ImageGrid& source) {
    const int depth = static_cast<int>(cfg.number_or("bit_depth", source.source_bit_depth() == 16 ? 16 : 8));
    if (depth != 8 && depth != 16) throw ContractError("--bit-depth must be 8 or 16");
    return depth;
}

fs::path audit_path(const fs::path& output) {
    return output.parent_path() / (output.stem().string() + ".energy.csv");
}

void write_audit(const fs::path& output, const std::vector<EnergyReport>& reports) {
    const fs::path p = audit_path(output);
    std::ofstream os(p);
    if (!os) throw IoError("cannot write " + p.string());
    write_energy_csv(os, reports);
    if (!os) throw IoError("write failed: " + p.string());
}

ImageGrid guide_image(const RunConfig& cfg, const ImageGrid& f, bool self_guided) {
    ImageGrid g;
    if (cfg.has("guide")) {
        if (self_guided) {
            throw ContractError("this preset uses the input as its own guide; drop --guide");
        }
        g = load_image(cfg.string_or("guide", ""));
    } else {
        g = f;
    }
    if (cfg.flag_or("gray_guide", false)) g = to_gray(g);
    return g;
}

struct Extent2 {
    int width = 0;
    int height = 0;
};

Extent2 parse_size(const std::string& s) {
    const auto x = s.find('x');
    Extent2 e;
    try {
        if (x == std::string::npos) throw std::invalid_argument(s);
        std::size_t used = 0;
        e.width = std::stoi(s.substr(0, x), &used);
        if (used != x) throw std::invalid_argument(s);
        e.height = std::stoi(s.substr(x + 1), &used);
        if (used != s.size() - x - 1) throw std::invalid_argument(s);
    } catch (const std::exception&) {
        throw ContractError("--size expects WxH, got: " + s);
    }
    if (e.width < 1 || e.height < 1) throw ContractError("--size must be positive");
    return e;
}

// --- subcommands -------------------------------------------------------------

int cmd_smooth(const RunConfig& cfg, std::ostream& out) {
    const fs::path in = required(cfg, "input");
    const fs::path dst = required(cfg, "output");
    std::optional<Preset> p;
    if (cfg.has("preset")) p = preset_from_name(cfg.string_or("preset", ""));
    const SmoothingParams params = p ? params_for(cfg, *p) : raw_params(cfg);
    const ImageGrid f = load_image(in);
    const bool self_guided = p && preset_uses_self_guidance(*p);
    if (p && !self_guided && !cfg.has("guide")) {
        throw ContractError("preset " + std::string(preset_name(*p)) + " needs --guide");
    }
    const ImageGrid g = guide_image(cfg, f, self_guided);
    SmoothResult r = smooth(f, g, params, smooth_options(cfg));
    save_image(r.u, dst, output_depth(cfg, f));
    if (cfg.flag_or("audit", false)) write_audit(dst, r.reports);
    std::size_t cg = 0;
    for (const auto& s : r.solves) cg += s.cg_iterations;
    out << "wrote " << dst.string() << " (" << r.solves.size() << " solves, " << cg
        << " CG iterations)\n";
    return kOk;
}

TaskOptions task_options(const RunConfig& cfg, std::vector<EnergyReport>& reports) {
    TaskOptions t;
    t.smooth = smooth_options(cfg);
    if (t.smooth.audit) t.reports = &reports;
    return t;
}

void finish(const RunConfig& cfg, const ImageGrid& result, const ImageGrid& source,
            const std::vector<EnergyReport>& reports, std::ostream& out) {
    const fs::path dst = cfg.string_or("output", "");
    save_image(result, dst, output_depth(cfg, source));
    if (cfg.flag_or("audit", false)) write_audit(dst, reports);
    out << "wrote " << dst.string() << "\n";
}

int cmd_enhance(const RunConfig& cfg, std::ostream& out) {
    const fs::path in = required(cfg, "input");
    required(cfg, "output");
    const ImageGrid f = load_image(in);
    std::vector<EnergyReport> reports;
    const ImageGrid e = enhance_detail(f, cfg.number_or("lambda", 20.0), cfg.number_or("boost", 3.0),
                                       int_key(cfg, "r").value_or(2), task_options(cfg, reports));
    finish(cfg, e, f, reports, out);
    return kOk;
}

int cmd_clipart(const RunConfig& cfg, std::ostream& out) {
    const fs::path in = required(cfg, "input");
    required(cfg, "output");
    const ImageGrid f = load_image(in);
    std::vector<EnergyReport> reports;
    const ImageGrid e =
        remove_clipart_artifacts(f, cfg.number_or("b", 0.2), int_key(cfg, "r").value_or(1),
                                 cfg.number_or("lambda", 1.0), task_options(cfg, reports));
    finish(cfg, e, f, reports, out);
    return kOk;
}

int cmd_texture(const RunConfig& cfg, std::ostream& out) {
    const fs::path in = required(cfg, "input");
    required(cfg, "output");
    const ImageGrid f = load_image(in);
    std::vector<EnergyReport> reports;
    const ImageGrid e = remove_texture(f, cfg.number_or("lambda", 0.5), int_key(cfg, "r").value_or(1),
                                       task_options(cfg, reports));
    finish(cfg, e, f, reports, out);
    return kOk;
}

int cmd_upsample(const RunConfig& cfg, std::ostream& out) {
    DepthSample s;
    s.low_res = load_image(required(cfg, "input"));
    if (s.low_res.channels() != 1) {
        throw ContractError("--in must be a single-channel depth map");
    }
    s.guide = load_image(required(cfg, "guide"));
    if (cfg.flag_or("gray_guide", false)) s.guide = to_gray(s.guide);
    required(cfg, "output");
    if (cfg.has("gt")) s.ground_truth = load_image(cfg.string_or("gt", ""));
    if (cfg.has("scale")) {
        s.scale = int_key(cfg, "scale").value();
    } else if (s.low_res.width() > 0) {
        s.scale = s.guide.width() / s.low_res.width();
    }
    const SmoothingParams params = params_for(depth_defaults(cfg), Preset::group3_guided);
    std::vector<EnergyReport> reports;
    const ImageGrid u = upsample_depth(s, params, task_options(cfg, reports));
    finish(cfg, u, s.low_res, reports, out);
    if (s.ground_truth) {
        const ImageGrid gt = to_gray(*s.ground_truth);
        const ImageGrid base = bicubic_resize(s.low_res, s.guide.extent());
        ImageGrid base_clamped = base;
        base_clamped.clamp();
        out.precision(6);
        out << "mae " << mae(u, gt).value * 255.0 << " baseline_mae "
            << mae(base_clamped, gt).value * 255.0 << " (8-bit intensity units)\n";
    }
    return kOk;
}

struct FixtureDefaults {
    Preset preset;
    double lambda;
    int radius;
    std::optional<double> b;
};

FixtureDefaults fixture_defaults(FixtureKind k) {
    switch (k) {
        case FixtureKind::step_details: return {Preset::group1_detail, 20.0, 1, std::nullopt};
        case FixtureKind::pulses: return {Preset::group4_texture, 20.0, 1, std::nullopt};
        case FixtureKind::blurred_step: return {Preset::group2_sharpen, 500.0, 1, 0.15};
    }
    return {Preset::group4_texture, 20.0, 1, std::nullopt};
}

int cmd_demo(const RunConfig& cfg, std::ostream& out) {
    const FixtureKind kind = fixture_from_name(cfg.string_or("fixture", "step_details"));
    const long seed = static_cast<long>(cfg.number_or("seed", 0.0));
    if (seed < 0) throw ContractError("--seed must be >= 0");
    const ImageGrid f = cfg.has("input") ? load_signal_csv(cfg.string_or("input", ""))
                                         : gen_1d_fixture(kind, static_cast<std::uint64_t>(seed));
    const FixtureDefaults d = fixture_defaults(kind);
    const Preset p = cfg.has("preset") ? preset_from_name(cfg.string_or("preset", "")) : d.preset;
    RunConfig resolved = cfg;
    if (!cfg.has("preset")) {
        if (!cfg.has("lambda")) resolved.numbers["lambda"] = d.lambda;
        if (!cfg.has("r")) resolved.numbers["r"] = d.radius;
        if (!cfg.has("b") && d.b) resolved.numbers["b"] = *d.b;
    }
    if (!preset_uses_self_guidance(p)) {
        throw ContractError("demo-1d has no guide signal; pick a self-guided preset");
    }
    const fs::path dst = required(cfg, "output");
    SmoothResult r = smooth(f, f, params_for(resolved, p), smooth_options(cfg));
    save_signal_csv(r.u, dst);
    if (cfg.flag_or("audit", false)) write_audit(dst, r.reports);
    out << "wrote " << dst.string() << " (" << fixture_name(kind) << ", preset "
        << preset_name(p) << ")\n";
    if (!cfg.has("input")) {
        const auto u = r.u.data();
        const auto in = f.data();
        if (kind == FixtureKind::pulses) {
            const PulseScores ps = score_pulses(u, static_cast<std::uint64_t>(seed));
            out << "small_pulse_residual " << ps.small_residual << " large_pulse_level "
                << ps.large_level << "\n";
        } else if (kind == FixtureKind::step_details) {
            out << "window_overshoot " << window_overshoot(in, u, 3) << " step_monotone "
                << (monotone_across_step(in, u, static_cast<int>(in.size()) / 2) ? "yes" : "no")
                << "\n";
        } else {
            out << "transition_width input " << transition_width(in) << " output "
                << transition_width(u) << "\n";
        }
    }
    return kOk;
}

int cmd_eval(const RunConfig& cfg, std::ostream& out) {
    const auto entries = load_manifest(required(cfg, "manifest"));
    const SmoothingParams params = params_for(depth_defaults(cfg), Preset::group3_guided);
    std::vector<MaeRow> rows;
    if (!cfg.flag_or("gray_guide", false)) {
        rows = evaluate_manifest(entries, params);
    } else {
        for (const auto& e : entries) {
            DepthSample s;
            s.low_res = to_gray(load_image(e.low_res));
            s.guide = to_gray(load_image(e.guide));
            s.ground_truth = to_gray(load_image(e.ground_truth));
            s.scale = e.scale;
            const ImageGrid u = upsample_depth(s, params);
            ImageGrid base = bicubic_resize(s.low_res, s.guide.extent());
            base.clamp();
            rows.push_back({e.ground_truth.stem().string(), e.scale,
                            mae(u, *s.ground_truth).value * 255.0,
                            mae(base, *s.ground_truth).value * 255.0});
        }
    }
    if (cfg.has("csv")) {
        const fs::path p = cfg.string_or("csv", "");
        std::ofstream os(p);
        if (!os) throw IoError("cannot write " + p.string());
        write_mae_csv(os, rows);
        out << "wrote " << p.string() << " (" << rows.size() << " samples, 8-bit intensity units)\n";
    } else {
        write_mae_csv(out, rows);
    }
    return kOk;
}

int cmd_bench(const RunConfig& cfg, std::ostream& out) {
    ImageGrid f;
    if (cfg.has("input")) {
        f = load_image(cfg.string_or("input", ""));
    } else {
        const Extent2 e = parse_size(cfg.string_or("size", "800x600"));
        const long seed = static_cast<long>(cfg.number_or("seed", 1.0));
        if (seed < 0) throw ContractError("--seed must be >= 0");
        f = make_bench_image(e.height, e.width, static_cast<std::uint64_t>(seed));
    }
    const int repeat = int_key(cfg, "repeat").value_or(1);
    if (repeat < 1) throw ContractError("--repeat must be >= 1");
    std::vector<int> radii;
    if (cfg.flag_or("sweep", false)) {
        if (cfg.has("r")) throw ContractError("--sweep and --r are exclusive");
        radii = {1, 2, 3, 4, 5};
    } else {
        radii = {int_key(cfg, "r").value_or(1)};
    }
    // group4_texture regime with the radius and N left free, as in the
    // runtime table (r up to 5).
    SmoothingParams params = preset(Preset::group4_texture);
    params.lambda = cfg.number_or("lambda", params.lambda);
    params.n_iters = int_key(cfg, "n_iters").value_or(params.n_iters);
    const SmoothOptions options = smooth_options(cfg);
    out << "size,r,n,seconds,cg_iterations\n";
    for (const int r : radii) {
        params.r_d = params.r_s = r;
        require_valid(params);
        for (int k = 0; k < repeat; ++k) {
            const auto t0 = std::chrono::steady_clock::now();
            const SmoothResult res = smooth(f, f, params, options);
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::size_t cg = 0;
            for (const auto& s : res.solves) cg += s.cg_iterations;
            out << f.width() << 'x' << f.height() << ',' << r << ',' << params.n_iters << ','
                << secs << ',' << cg << '\n';
            out.flush();
        }
    }
    return kOk;
}

int dispatch(const std::string& name, const RunConfig& cfg, std::ostream& out) {
    if (name == "smooth") return cmd_smooth(cfg, out);
    if (name == "enhance") return cmd_enhance(cfg, out);
    if (name == "clipart") return cmd_clipart(cfg, out);
    if (name == "upsample-depth") return cmd_upsample(cfg, out);
    if (name == "texture") return cmd_texture(cfg, out);
    if (name == "demo-1d") return cmd_demo(cfg, out);
    if (name == "eval-mae") return cmd_eval(cfg, out);
    if (name == "bench") return cmd_bench(cfg, out);
    throw ContractError("unknown command " + name);
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"thsmooth: truncated-Huber image smoothing"};
    app.name("thsmooth");
    app.require_subcommand(1);
    app.footer(preset_table());

    struct Bound {
        std::string key;
        CLI::Option* option = nullptr;
        bool is_flag = false;
    };
    const auto cmds = commands();
    std::map<std::string, std::vector<Bound>> bound;
    std::map<std::string, std::string> config_path;
    // CLI11 writes into these; one slot per (command, key).
    std::map<std::string, std::map<std::string, std::string>> text;

    for (const auto& c : cmds) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        sub->footer(preset_table());
        sub->add_option("--config", config_path[c.name], "key = value file; flags override it");
        std::vector<std::string> keys = c.keys;
        keys.insert(keys.end(), kCommon.begin(), kCommon.end());
        for (const auto& k : keys) {
            const FlagDef& f = flag_for(k);
            Bound b{k, nullptr, f.is_flag};
            if (f.is_flag) {
                b.option = sub->add_flag(f.name, f.help);
            } else {
                b.option = sub->add_option(f.name, text[c.name][k], f.help);
            }
            bound[c.name].push_back(b);
        }
    }

    std::vector<const char*> argv{"thsmooth"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    const CLI::App* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    try {
        RunConfig cfg;
        const auto& allowed = bound[name];
        if (!config_path[name].empty()) {
            const RunConfig file = load_run_config(config_path[name]);
            const auto is_allowed = [&](const std::string& k) {
                return k == "task" ||
                       std::any_of(allowed.begin(), allowed.end(), [&](const Bound& b) { return b.key == k; });
            };
            auto check = [&](const std::string& k) {
                if (!is_allowed(k)) throw ContractError("key " + k + " does not apply to " + name);
            };
            for (const auto& [k, v] : file.strings) check(k);
            for (const auto& [k, v] : file.flags) check(k);
            for (const auto& [k, v] : file.numbers) check(k);
            if (file.has("task") && file.string_or("task", "") != name) {
                throw ContractError("config task " + file.string_or("task", "") +
                                    " does not match command " + name);
            }
            cfg = file;
        }
        for (const auto& b : allowed) {
            if (b.option->count() == 0) continue;
            cfg.set(b.key, b.is_flag ? "true" : text[name][b.key]);
        }
        apply_threads(cfg);
        return dispatch(name, cfg, out);
    } catch (const ContractError& e) {
        err << "thsmooth " << name << ": " << e.what() << "\n";
        return kUsage;
    } catch (const SolverStagnation& e) {
        err << "thsmooth " << name << ": solver stagnation: " << e.what() << "\n";
        return kRuntime;
    } catch (const DescentViolation& e) {
        err << "thsmooth " << name << ": descent violation: " << e.what() << "\n";
        return kRuntime;
    } catch (const IoError& e) {
        err << "thsmooth " << name << ": " << e.what() << "\n";
        return kRuntime;
    } catch (const std::exception& e) {
        err << "thsmooth " << name << ": " << e.what() << "\n";
        return kRuntime;
    }
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace thsmooth::cli
