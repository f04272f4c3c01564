#include "thsmooth/io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <csetjmp>
#include <fstream>
#include <iterator>
#include <sstream>

namespace thsmooth {
namespace {

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

std::string lower_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

// --- PNG -------------------------------------------------------------------

// Everything libpng touches between setjmp and a possible longjmp lives here,
// so no destructor is skipped.
struct PngState {
    const std::vector<std::uint8_t>* input = nullptr;
    std::size_t cursor = 0;
    std::vector<std::uint8_t>* output = nullptr;
    std::array<char, 256> message{};
    png_uint_32 width = 0;
    png_uint_32 height = 0;
    int channels = 0;
    int depth = 0;
    std::vector<std::uint8_t> pixels;
    std::vector<png_bytep> rows;
};

void png_fail(png_structp png, png_const_charp msg) {
    auto* state = static_cast<PngState*>(png_get_error_ptr(png));
    std::snprintf(state->message.data(), state->message.size(), "%s", msg);
    png_longjmp(png, 1);
}

void png_warn(png_structp, png_const_charp) {}

void png_read_mem(png_structp png, png_bytep dst, png_size_t len) {
    auto* state = static_cast<PngState*>(png_get_io_ptr(png));
    if (state->cursor + len > state->input->size()) {
        png_error(png, "truncated PNG stream");
    }
    std::memcpy(dst, state->input->data() + state->cursor, len);
    state->cursor += len;
}

void png_write_mem(png_structp png, png_bytep src, png_size_t len) {
    auto* state = static_cast<PngState*>(png_get_io_ptr(png));
    state->output->insert(state->output->end(), src, src + len);
}

void png_flush_mem(png_structp) {}

bool decode_png(PngState& st) {
    png_structp png =
        png_create_read_struct(PNG_LIBPNG_VER_STRING, &st, png_fail, png_warn);
    if (!png) return false;
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        return false;
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        return false;
    }
    png_set_read_fn(png, &st, png_read_mem);
    png_read_info(png, info);

    const int color = png_get_color_type(png, info);
    const int bits = png_get_bit_depth(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && bits < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    png_read_update_info(png, info);

    st.width = png_get_image_width(png, info);
    st.height = png_get_image_height(png, info);
    st.channels = png_get_channels(png, info);
    st.depth = png_get_bit_depth(png, info);
    const std::size_t stride = png_get_rowbytes(png, info);
    st.pixels.resize(stride * st.height);
    st.rows.resize(st.height);
    for (png_uint_32 y = 0; y < st.height; ++y) st.rows[y] = st.pixels.data() + y * stride;
    png_read_image(png, st.rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return true;
}

bool encode_png(PngState& st) {
    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, &st, png_fail, png_warn);
    if (!png) return false;
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        return false;
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        return false;
    }
    png_set_write_fn(png, &st, png_write_mem, png_flush_mem);
    png_set_IHDR(png, info, st.width, st.height, st.depth,
                 st.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, st.rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return true;
}

ImageGrid load_png(const std::vector<std::uint8_t>& bytes) {
    PngState st;
    st.input = &bytes;
    if (!decode_png(st)) {
        throw IoError(std::string("PNG decode failed: ") + st.message.data());
    }
    if (st.channels != 1 && st.channels != 3) {
        throw IoError("PNG: unsupported channel layout");
    }
    const int h = static_cast<int>(st.height);
    const int w = static_cast<int>(st.width);
    ImageGrid grid(h, w, st.channels);
    auto data = grid.data();
    if (st.depth == 16) {
        for (std::size_t i = 0; i < data.size(); ++i) {
            const unsigned v = (unsigned(st.pixels[2 * i]) << 8) | st.pixels[2 * i + 1];
            data[i] = v / 65535.0;
        }
    } else {
        for (std::size_t i = 0; i < data.size(); ++i) data[i] = st.pixels[i] / 255.0;
    }
    grid.set_source_bit_depth(st.depth);
    return grid;
}

void save_png(const ImageGrid& grid, const std::filesystem::path& path, int bit_depth) {
    PngState st;
    std::vector<std::uint8_t> out;
    st.output = &out;
    st.width = static_cast<png_uint_32>(grid.width());
    st.height = static_cast<png_uint_32>(grid.height());
    st.channels = grid.channels();
    st.depth = bit_depth;
    const auto data = grid.data();
    const std::size_t bytes_per = bit_depth == 16 ? 2 : 1;
    st.pixels.resize(data.size() * bytes_per);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const unsigned q = quantize(data[i], bit_depth);
        if (bit_depth == 16) {
            st.pixels[2 * i] = static_cast<std::uint8_t>(q >> 8);
            st.pixels[2 * i + 1] = static_cast<std::uint8_t>(q & 0xff);
        } else {
            st.pixels[i] = static_cast<std::uint8_t>(q);
        }
    }
    const std::size_t stride = grid.width() * grid.channels() * bytes_per;
    st.rows.resize(st.height);
    for (png_uint_32 y = 0; y < st.height; ++y) st.rows[y] = st.pixels.data() + y * stride;
    if (!encode_png(st)) {
        throw IoError(std::string("PNG encode failed: ") + st.message.data());
    }
    write_bytes(path, out);
}

// --- PNM / PFM -------------------------------------------------------------

struct HeaderReader {
    const std::vector<std::uint8_t>& bytes;
    std::size_t pos = 2;

    std::string token() {
        while (pos < bytes.size()) {
            if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(bytes[pos])) {
                ++pos;
            } else {
                break;
            }
        }
        std::string t;
        while (pos < bytes.size() && !std::isspace(bytes[pos])) {
            t.push_back(static_cast<char>(bytes[pos++]));
        }
        if (t.empty()) throw IoError("truncated header");
        return t;
    }

    long integer() {
        const std::string t = token();
        long v = 0;
        const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || p != t.data() + t.size()) {
            throw IoError("malformed header value: " + t);
        }
        return v;
    }

    // Exactly one whitespace byte separates the header from the raster.
    std::size_t raster_start() {
        if (pos >= bytes.size()) throw IoError("truncated header");
        return pos + 1;
    }
};

ImageGrid load_pnm(const std::vector<std::uint8_t>& bytes) {
    const int channels = bytes[1] == '5' ? 1 : 3;
    HeaderReader hdr{bytes};
    const long w = hdr.integer();
    const long h = hdr.integer();
    const long maxval = hdr.integer();
    if (w < 1 || h < 1 || maxval < 1 || maxval > 65535) {
        throw IoError("PNM: unsupported dimensions or maxval");
    }
    const std::size_t start = hdr.raster_start();
    const std::size_t bytes_per = maxval > 255 ? 2 : 1;
    const std::size_t count = static_cast<std::size_t>(w) * h * channels;
    if (bytes.size() < start + count * bytes_per) {
        throw IoError("PNM: truncated raster");
    }
    ImageGrid grid(static_cast<int>(h), static_cast<int>(w), channels);
    auto data = grid.data();
    for (std::size_t i = 0; i < count; ++i) {
        unsigned v = bytes[start + i * bytes_per];
        if (bytes_per == 2) v = (v << 8) | bytes[start + 2 * i + 1];
        if (v > static_cast<unsigned>(maxval)) throw IoError("PNM: sample above maxval");
        data[i] = static_cast<double>(v) / static_cast<double>(maxval);
    }
    grid.set_source_bit_depth(std::bit_width(static_cast<unsigned>(maxval)));
    return grid;
}

void save_pnm(const ImageGrid& grid, const std::filesystem::path& path, int bit_depth) {
    std::ostringstream header;
    header << (grid.channels() == 1 ? "P5" : "P6") << '\n'
           << grid.width() << ' ' << grid.height() << '\n'
           << (bit_depth == 16 ? 65535 : 255) << '\n';
    const std::string h = header.str();
    std::vector<std::uint8_t> out(h.begin(), h.end());
    for (double v : grid.data()) {
        const unsigned q = quantize(v, bit_depth);
        if (bit_depth == 16) out.push_back(static_cast<std::uint8_t>(q >> 8));
        out.push_back(static_cast<std::uint8_t>(q & 0xff));
    }
    write_bytes(path, out);
}

ImageGrid load_pfm(const std::vector<std::uint8_t>& bytes) {
    const int channels = bytes[1] == 'f' ? 1 : 3;
    HeaderReader hdr{bytes};
    const long w = hdr.integer();
    const long h = hdr.integer();
    const std::string scale_text = hdr.token();
    double scale = 0.0;
    try {
        scale = std::stod(scale_text);
    } catch (const std::exception&) {
        throw IoError("PFM: malformed scale");
    }
    if (w < 1 || h < 1 || scale == 0.0 || !std::isfinite(scale)) {
        throw IoError("PFM: unsupported header");
    }
    const bool little = scale < 0.0;
    const std::size_t start = hdr.raster_start();
    const std::size_t row_len = static_cast<std::size_t>(w) * channels;
    if (bytes.size() < start + row_len * h * 4) {
        throw IoError("PFM: truncated raster");
    }
    ImageGrid grid(static_cast<int>(h), static_cast<int>(w), channels);
    auto data = grid.data();
    for (long y = 0; y < h; ++y) {
        // Rows are stored bottom to top.
        const std::size_t src_row = start + static_cast<std::size_t>(h - 1 - y) * row_len * 4;
        for (std::size_t k = 0; k < row_len; ++k) {
            std::array<std::uint8_t, 4> b{};
            std::memcpy(b.data(), bytes.data() + src_row + 4 * k, 4);
            if (little != (std::endian::native == std::endian::little)) {
                std::reverse(b.begin(), b.end());
            }
            float v = 0.0F;
            std::memcpy(&v, b.data(), 4);
            if (!std::isfinite(v)) throw IoError("PFM: non-finite sample");
            data[static_cast<std::size_t>(y) * row_len + k] = v;
        }
    }
    grid.set_source_bit_depth(32);
    return grid;
}

void save_pfm(const ImageGrid& grid, const std::filesystem::path& path) {
    static_assert(std::endian::native == std::endian::little);
    std::ostringstream header;
    header << (grid.channels() == 1 ? "Pf" : "PF") << '\n'
           << grid.width() << ' ' << grid.height() << '\n'
           << "-1.0\n";
    const std::string h = header.str();
    std::vector<std::uint8_t> out(h.begin(), h.end());
    const std::size_t row_len = static_cast<std::size_t>(grid.width()) * grid.channels();
    const auto data = grid.data();
    for (int y = grid.height() - 1; y >= 0; --y) {
        for (std::size_t k = 0; k < row_len; ++k) {
            const float v = static_cast<float>(data[static_cast<std::size_t>(y) * row_len + k]);
            std::array<std::uint8_t, 4> b{};
            std::memcpy(b.data(), &v, 4);
            out.insert(out.end(), b.begin(), b.end());
        }
    }
    write_bytes(path, out);
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view text, double& out) {
    const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && p == text.data() + text.size() && std::isfinite(out);
}

enum class KeyKind { string, flag, decimal, integer };

struct KeySpec {
    std::string_view name;
    KeyKind kind;
};

constexpr std::array<KeySpec, 33> kKeys{{
    {"task", KeyKind::string},    {"input", KeyKind::string},    {"guide", KeyKind::string},
    {"output", KeyKind::string},  {"preset", KeyKind::string},   {"manifest", KeyKind::string},
    {"csv", KeyKind::string},     {"audit", KeyKind::flag},      {"gray_guide", KeyKind::flag},
    {"lambda", KeyKind::decimal}, {"alpha", KeyKind::decimal},   {"a_d", KeyKind::decimal},
    {"b_d", KeyKind::decimal},    {"a_s", KeyKind::decimal},     {"b_s", KeyKind::decimal},
    {"delta", KeyKind::decimal},  {"epsilon", KeyKind::decimal}, {"b", KeyKind::decimal},
    {"boost", KeyKind::decimal},  {"r_d", KeyKind::integer},     {"r_s", KeyKind::integer},
    {"r", KeyKind::integer},      {"n_iters", KeyKind::integer}, {"scale", KeyKind::integer},
    {"threads", KeyKind::integer}, {"bit_depth", KeyKind::integer},
    {"gt", KeyKind::string},      {"fixture", KeyKind::string},  {"size", KeyKind::string},
    {"preconditioner", KeyKind::string}, {"seed", KeyKind::integer},
    {"repeat", KeyKind::integer}, {"sweep", KeyKind::flag},
}};

const KeySpec* find_key(std::string_view key) {
    for (const auto& k : kKeys) {
        if (k.name == key) return &k;
    }
    return nullptr;
}

}  // namespace

unsigned quantize(double v, int bit_depth) {
    const double max_code = bit_depth == 16 ? 65535.0 : 255.0;
    const double clamped = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
    return static_cast<unsigned>(std::round(clamped * max_code));
}

ImageGrid load_image(const std::filesystem::path& path) {
    const auto bytes = read_bytes(path);
    if (bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0) {
        return load_png(bytes);
    }
    if (bytes.size() >= 3 && bytes[0] == 'P') {
        switch (bytes[1]) {
            case '5':
            case '6':
                return load_pnm(bytes);
            case 'f':
            case 'F':
                return load_pfm(bytes);
            default:
                break;
        }
    }
    throw IoError("unsupported image format: " + path.string());
}

void save_image(const ImageGrid& grid, const std::filesystem::path& path, int bit_depth) {
    if (bit_depth != 8 && bit_depth != 16) {
        throw ContractError("save_image: bit depth must be 8 or 16");
    }
    for (double v : grid.data()) {
        if (!std::isfinite(v)) throw ContractError("save_image: non-finite sample");
    }
    const std::string ext = lower_extension(path);
    if (ext == ".png") {
        save_png(grid, path, bit_depth);
    } else if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") {
        save_pnm(grid, path, bit_depth);
    } else if (ext == ".pfm") {
        save_pfm(grid, path);
    } else {
        throw IoError("unsupported output extension: " + path.string());
    }
}

ImageGrid load_signal_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty()) continue;
        double v = 0.0;
        if (!parse_double(t, v)) {
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": not a number");
        }
        values.push_back(v);
    }
    if (values.empty()) {
        throw IoError(path.string() + ": empty signal");
    }
    const int w = static_cast<int>(values.size());
    return ImageGrid(1, w, 1, std::move(values));
}

void save_signal_csv(const ImageGrid& signal, const std::filesystem::path& path) {
    if (signal.height() != 1 || signal.channels() != 1) {
        throw ContractError("save_signal_csv: expects a 1 x W single-channel grid");
    }
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out.precision(17);
    for (double v : signal.data()) out << v << '\n';
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

ImageGrid to_gray(const ImageGrid& grid) {
    if (grid.channels() == 1) return grid;
    ImageGrid gray(grid.height(), grid.width(), 1, grid.intensity_max());
    for (int y = 0; y < grid.height(); ++y) {
        for (int x = 0; x < grid.width(); ++x) {
            gray.at(y, x) =
                0.299 * grid.at(y, x, 0) + 0.587 * grid.at(y, x, 1) + 0.114 * grid.at(y, x, 2);
        }
    }
    return gray;
}

bool is_run_config_key(std::string_view key) { return find_key(key) != nullptr; }

void RunConfig::set(std::string_view key, std::string_view value) {
    const KeySpec* spec = find_key(key);
    if (!spec) {
        throw ContractError("unknown configuration key: " + std::string(key));
    }
    const std::string k(key);
    const std::string_view v = trim(value);
    switch (spec->kind) {
        case KeyKind::string:
            strings[k] = std::string(v);
            break;
        case KeyKind::flag:
            if (v == "true" || v == "1") {
                flags[k] = true;
            } else if (v == "false" || v == "0") {
                flags[k] = false;
            } else {
                throw ContractError("key " + k + " expects true/false, got: " + std::string(v));
            }
            break;
        case KeyKind::decimal: {
            double d = 0.0;
            if (!parse_double(v, d)) {
                throw ContractError("key " + k + " expects a decimal, got: " + std::string(v));
            }
            numbers[k] = d;
            break;
        }
        case KeyKind::integer: {
            long i = 0;
            const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), i);
            if (ec != std::errc() || p != v.data() + v.size() || v.empty()) {
                throw ContractError("key " + k + " expects an integer, got: " + std::string(v));
            }
            numbers[k] = static_cast<double>(i);
            break;
        }
    }
}

bool RunConfig::has(std::string_view key) const {
    const std::string k(key);
    return strings.count(k) || flags.count(k) || numbers.count(k);
}

std::string RunConfig::string_or(std::string_view key, std::string fallback) const {
    const auto it = strings.find(std::string(key));
    return it == strings.end() ? fallback : it->second;
}

bool RunConfig::flag_or(std::string_view key, bool fallback) const {
    const auto it = flags.find(std::string(key));
    return it == flags.end() ? fallback : it->second;
}

double RunConfig::number_or(std::string_view key, double fallback) const {
    const auto it = numbers.find(std::string(key));
    return it == numbers.end() ? fallback : it->second;
}

RunConfig parse_run_config(std::string_view text) {
    RunConfig cfg;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ContractError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    const auto bytes = read_bytes(path);
    return parse_run_config(std::string_view(reinterpret_cast<const char*>(bytes.data()),
                                             bytes.size()));
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    const auto base = path.parent_path();
    auto resolve = [&](const std::string& p) {
        const std::filesystem::path fp(p);
        return fp.is_absolute() ? fp : base / fp;
    };
    std::vector<ManifestEntry> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string low, guide, gt, scale;
        if (!(fields >> low)) continue;
        std::string extra;
        if (!(fields >> guide >> gt >> scale) || (fields >> extra)) {
            throw IoError(path.string() + ":" + std::to_string(line_no) +
                          ": expected `low_res guide ground_truth scale`");
        }
        ManifestEntry e;
        e.low_res = resolve(low);
        e.guide = resolve(guide);
        e.ground_truth = resolve(gt);
        const auto [p, ec] = std::from_chars(scale.data(), scale.data() + scale.size(), e.scale);
        if (ec != std::errc() || p != scale.data() + scale.size() || e.scale < 1) {
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": bad scale");
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

}  // namespace thsmooth
