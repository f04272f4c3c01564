#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>

#include "thsmooth/io.hpp"
#include "thsmooth_cli/cli.hpp"

namespace fs = std::filesystem;
namespace cli = thsmooth::cli;

namespace {

const fs::path kData = THSMOOTH_TEST_DATA_DIR;

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string bytes_of(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("thsmooth_cli_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string data(const std::string& name) { return (kData / name).string(); }

}  // namespace

TEST_CASE("smooth happy path") {
    TempDir t;
    const Run r = run({"smooth", "--preset", "group4_texture", "--lambda", "0.7", "--in",
                       data("card.png"), "--out", t / "b.png"});
    CHECK(r.code == cli::kOk);
    CHECK(fs::exists(t / "b.png"));
    const auto img = thsmooth::load_image(t / "b.png");
    CHECK(img.width() == 48);
    CHECK(img.channels() == 3);
}

TEST_CASE("usage errors exit with 1") {
    TempDir t;
    const std::string in = data("card.png");
    CHECK(run({"smooth", "--preset", "tv_approx", "--alpha", "0.3", "--in", in, "--out", t / "x.png"}).code ==
          cli::kUsage);
    CHECK(run({"smooth", "--bogus"}).code == cli::kUsage);
    CHECK(run({}).code == cli::kUsage);
    CHECK(run({"frobnicate"}).code == cli::kUsage);
    CHECK(run({"smooth", "--in", in}).code == cli::kUsage);
    CHECK(run({"smooth", "--preset", "nope", "--in", in, "--out", t / "x.png"}).code == cli::kUsage);
    CHECK(run({"smooth", "--preset", "group3_guided", "--in", in, "--out", t / "x.png"}).code ==
          cli::kUsage);
    CHECK(run({"smooth", "--lambda", "-1", "--in", in, "--out", t / "x.png"}).code == cli::kUsage);
    CHECK(run({"smooth", "--r", "1.5", "--in", in, "--out", t / "x.png"}).code == cli::kUsage);
    const Run e = run({"texture", "--r", "9", "--in", in, "--out", t / "x.png"});
    CHECK(e.code == cli::kUsage);
    CHECK_FALSE(e.err.empty());
}

TEST_CASE("runtime errors exit with 2") {
    TempDir t;
    CHECK(run({"smooth", "--in", t / "missing.png", "--out", t / "x.png"}).code == cli::kRuntime);
    std::ofstream(t / "junk.png") << "garbage";
    const Run r = run({"smooth", "--in", t / "junk.png", "--out", t / "x.png"});
    CHECK(r.code == cli::kRuntime);
    CHECK(r.err.find("unsupported") != std::string::npos);
    CHECK(run({"smooth", "--in", data("card.png"), "--out", t / "nodir/x.png"}).code == cli::kRuntime);
}

TEST_CASE("help lists presets and their parameter values") {
    const Run r = run({"--help"});
    CHECK(r.code == cli::kOk);
    for (const char* name : {"tv_approx", "wls_like", "tvl1_like", "group1_detail", "group2_sharpen",
                             "group3_guided", "group4_texture", "THSMOOTH_THREADS"}) {
        CHECK(r.out.find(name) != std::string::npos);
    }
    CHECK(run({"smooth", "--help"}).code == cli::kOk);
}

TEST_CASE("audit writes the energy report and leaves the image unchanged") {
    TempDir t;
    const std::string in = data("clipart.png");
    REQUIRE(run({"clipart", "--in", in, "--out", t / "plain.png"}).code == cli::kOk);
    REQUIRE(run({"clipart", "--in", in, "--out", t / "audited.png", "--audit"}).code == cli::kOk);
    CHECK(bytes_of(t / "plain.png") == bytes_of(t / "audited.png"));
    const std::string csv = bytes_of(t / "audited.energy.csv");
    CHECK(csv.rfind("k,e_u,e_ul,e_ulmu,residual,millis\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);
    CHECK_FALSE(fs::exists(t / "plain.energy.csv"));
}

TEST_CASE("repeated runs are byte-identical") {
    TempDir t;
    for (int k = 0; k < 2; ++k) {
        const std::string suffix = std::to_string(k);
        REQUIRE(run({"texture", "--in", data("checker.png"), "--out", t / ("t" + suffix + ".png")}).code == 0);
        REQUIRE(run({"demo-1d", "--fixture", "pulses", "--seed", "3", "--out", t / ("d" + suffix + ".csv")}).code == 0);
    }
    CHECK(bytes_of(t / "t0.png") == bytes_of(t / "t1.png"));
    CHECK(bytes_of(t / "d0.csv") == bytes_of(t / "d1.csv"));
}

TEST_CASE("config files supply keys and flags override them") {
    TempDir t;
    const std::string cfg = data("texture.cfg");
    REQUIRE(run({"texture", "--config", cfg, "--in", data("checker.png"), "--out", t / "a.png"}).code == 0);
    REQUIRE(run({"texture", "--lambda", "1", "--r", "2", "--in", data("checker.png"), "--out", t / "b.png"}).code == 0);
    CHECK(bytes_of(t / "a.png") == bytes_of(t / "b.png"));
    // A config for another task is rejected.
    CHECK(run({"clipart", "--config", cfg, "--in", data("checker.png"), "--out", t / "c.png"}).code ==
          cli::kUsage);
    std::ofstream(t / "bad.cfg") << "sigma = 2\n";
    CHECK(run({"texture", "--config", t / "bad.cfg", "--in", data("checker.png"), "--out", t / "c.png"}).code ==
          cli::kUsage);
}

TEST_CASE("task subcommands") {
    TempDir t;
    CHECK(run({"enhance", "--in", data("card.png"), "--out", t / "e.png", "--boost", "2"}).code == 0);
    CHECK(run({"upsample-depth", "--in", data("depth_low.png"), "--guide", data("depth_guide.png"),
               "--scale", "4", "--out", t / "u.pfm"})
              .code == 0);
    CHECK(thsmooth::load_image(t / "u.pfm").width() == 64);
    CHECK(run({"upsample-depth", "--in", data("depth_low.png"), "--guide", data("depth_guide.png"),
               "--scale", "2", "--out", t / "u.pfm"})
              .code == cli::kUsage);
    const Run demo = run({"demo-1d", "--in", data("blurred_step.csv"), "--out", t / "s.csv",
                          "--fixture", "blurred_step"});
    CHECK(demo.code == 0);
    CHECK(thsmooth::load_signal_csv(t / "s.csv").width() == 256);
}

TEST_CASE("eval-mae writes a csv against the bicubic baseline") {
    TempDir t;
    const Run r = run({"eval-mae", "--manifest", data("depth_manifest.txt"), "--csv", t / "m.csv"});
    CHECK(r.code == 0);
    const std::string csv = bytes_of(t / "m.csv");
    CHECK(csv.rfind("sample,scale,mae,baseline_mae\n", 0) == 0);
    CHECK(csv.find("depth_gt,4,") != std::string::npos);
}

TEST_CASE("bench prints one row per radius") {
    const Run r = run({"bench", "--size", "24x16", "--sweep", "--n", "2"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("size,r,n,seconds,cg_iterations\n", 0) == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 6);
    CHECK(r.out.find("24x16,5,2,") != std::string::npos);
    CHECK(run({"bench", "--size", "24by16"}).code == cli::kUsage);
    CHECK(run({"bench", "--sweep", "--r", "2", "--size", "8x8"}).code == cli::kUsage);
}
