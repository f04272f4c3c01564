#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "thsmooth/grid.hpp"

namespace thsmooth {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Decodes PNG (8/16-bit gray or RGB), binary PGM/PPM (P5/P6) or PFM by file
/// content. Integer formats are normalized by their maximum code value; PFM
/// samples are taken as-is and must be finite. Alpha channels are dropped.
[[nodiscard]] ImageGrid load_image(const std::filesystem::path& path);

/// Encodes by extension (.png, .pgm/.ppm/.pnm, .pfm). Integer formats clamp
/// to [0, 1] and quantize with round-half-away-from-zero to `bit_depth`
/// (8 or 16); PFM writes unclamped little-endian float32.
void save_image(const ImageGrid& grid, const std::filesystem::path& path, int bit_depth = 8);

/// The code value written for sample v at the given depth.
[[nodiscard]] unsigned quantize(double v, int bit_depth);

/// One decimal value per line; blank lines are ignored.
[[nodiscard]] ImageGrid load_signal_csv(const std::filesystem::path& path);
/// Writes a 1-row, 1-channel grid with 17 significant digits.
void save_signal_csv(const ImageGrid& signal, const std::filesystem::path& path);

/// Rec. 601 luma of a 3-channel grid; 1-channel grids are returned unchanged.
[[nodiscard]] ImageGrid to_gray(const ImageGrid& grid);

/// Flat run description, from a `key = value` file or from CLI flags.
///
/// String keys: task, input, guide, output, preset, manifest, csv, gt, fixture,
///   size, preconditioner.
/// Flag keys (true/false/1/0): audit, gray_guide, sweep.
/// Decimal keys: lambda, alpha, a_d, b_d, a_s, b_s, delta, epsilon, b, boost.
/// Integer keys: r_d, r_s, r, n_iters, scale, threads, bit_depth, seed, repeat.
struct RunConfig {
    std::map<std::string, std::string> strings;
    std::map<std::string, bool> flags;
    std::map<std::string, double> numbers;

    /// Validates key and value against the schema; throws ContractError.
    void set(std::string_view key, std::string_view value);

    [[nodiscard]] bool has(std::string_view key) const;
    [[nodiscard]] std::string string_or(std::string_view key, std::string fallback) const;
    [[nodiscard]] bool flag_or(std::string_view key, bool fallback) const;
    [[nodiscard]] double number_or(std::string_view key, double fallback) const;
};

[[nodiscard]] bool is_run_config_key(std::string_view key);
[[nodiscard]] RunConfig parse_run_config(std::string_view text);
[[nodiscard]] RunConfig load_run_config(const std::filesystem::path& path);

/// One benchmark sample: `low_res guide ground_truth scale` per line,
/// whitespace separated, `#` comments. Relative paths resolve against the
/// manifest's directory.
struct ManifestEntry {
    std::filesystem::path low_res;
    std::filesystem::path guide;
    std::filesystem::path ground_truth;
    int scale = 1;
};

[[nodiscard]] std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);

}  // namespace thsmooth
