#include "gridmark/codec.hpp"

#include "gridmark/error.hpp"
#include "gridmark/wavelet.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>

namespace gridmark {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

[[noreturn]] void bad_config(const std::string& what)
{
    throw Error(ErrorCode::BadParameter, "config: " + what);
}

std::vector<Direction> parse_directions(std::string_view list)
{
    std::vector<Direction> dirs;
    while (!list.empty()) {
        const std::size_t comma = list.find(',');
        const std::string_view item = trim(list.substr(0, comma));
        const Direction d = parse_direction(item);
        for (Direction e : dirs)
            if (e == d)
                bad_config("direction '" + std::string(item) + "' listed twice");
        dirs.push_back(d);
        if (comma == std::string_view::npos)
            break;
        list.remove_prefix(comma + 1);
    }
    return dirs;
}

// Norm of the per-matrix p1..p99 ranges.
double robust_scale(const GridModel& ref)
{
    double sum = 0.0;
    for (const Matrix& c : ref.coords) {
        std::vector<double> values(c.data(), c.data() + c.size());
        const double lo = percentile(values, 1.0);
        const double hi = percentile(std::move(values), 99.0);
        sum += (hi - lo) * (hi - lo);
    }
    const double s = std::sqrt(sum);
    if (!(s > 0.0))
        throw Error(ErrorCode::DegenerateModel, "model has zero coordinate range; cannot normalize");
    return s;
}

} // namespace

void EmbedConfig::validate() const
{
    if (key < 0)
        bad_config("key must be non-negative");
    if (!(q > 0.0) || !std::isfinite(q))
        bad_config("q must be positive");
    if (directions.empty())
        bad_config("at least one direction is required");
    for (std::size_t i = 0; i < directions.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (directions[i] == directions[j])
                bad_config("duplicate direction");
    if (!(0.0 <= r0() && r0() < threshold() && threshold() < r1() && r1() < q))
        bad_config("remainder targets must satisfy 0 <= r0 < t < r1 < q");
}

EmbedConfig parse_config(std::string_view text, const std::filesystem::path& base_dir)
{
    EmbedConfig cfg;
    int lineno = 0;
    while (!text.empty()) {
        const std::size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++lineno;
        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            bad_config("line " + std::to_string(lineno) + ": expected key=value");
        const std::string_view k = trim(line.substr(0, eq));
        const std::string_view v = trim(line.substr(eq + 1));
        if (k == "key") {
            auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), cfg.key);
            if (ec != std::errc() || p != v.data() + v.size())
                bad_config("bad key '" + std::string(v) + "'");
        } else if (k == "q") {
            auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), cfg.q);
            if (ec != std::errc() || p != v.data() + v.size())
                bad_config("bad q '" + std::string(v) + "'");
        } else if (k == "directions") {
            cfg.directions = parse_directions(v);
        } else if (k == "rules") {
            std::filesystem::path p(v);
            if (p.is_relative() && !base_dir.empty())
                p = base_dir / p;
            cfg.rules_path = p.string();
            cfg.rules_text = read_text_file(p);
        } else {
            bad_config("line " + std::to_string(lineno) + ": unknown key '" + std::string(k) + "'");
        }
    }
    cfg.validate();
    return cfg;
}

EmbedConfig load_config(const std::filesystem::path& path)
{
    return parse_config(read_text_file(path), path.parent_path());
}

std::string format_config(const EmbedConfig& cfg)
{
    std::string out = "key=" + std::to_string(cfg.key) + "\n";
    out += "q=" + format_double(cfg.q) + "\n";
    out += "directions=";
    for (std::size_t i = 0; i < cfg.directions.size(); ++i) {
        if (i)
            out += ',';
        out += direction_name(cfg.directions[i]);
    }
    out += "\n";
    if (!cfg.rules_path.empty())
        out += "rules=" + cfg.rules_path + "\n";
    return out;
}

std::string config_hash(const EmbedConfig& cfg)
{
    std::uint64_t h = 14695981039346656037ull;
    auto feed = [&h](std::string_view s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
    };
    EmbedConfig canon = cfg;
    canon.rules_path.clear();
    feed(format_config(canon));
    feed(cfg.rules_text);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

SlotMap::SlotMap(int n, int w, std::span<const Direction> directions)
{
    if (n <= 0 || n % kBlockSide != 0)
        throw Error(ErrorCode::DimensionError, "slot map needs N divisible by 8");
    if (w <= 0)
        throw Error(ErrorCode::NotSquare, "watermark side must be positive");
    const int m = n / kBlockSide;
    const int groups = static_cast<int>(directions.size()) * DetailTree::kEmbedBands;
    const std::int64_t bits = static_cast<std::int64_t>(w) * w;
    bit_slots_.resize(static_cast<std::size_t>(bits));
    slots_.reserve(static_cast<std::size_t>(groups) * m * m);
    std::int64_t ordinal = 0;
    for (int g = 0; g < groups; ++g) {
        // Rows advance evenly with g, columns by a golden-ratio stride.
        const int du = static_cast<int>(static_cast<std::int64_t>(g) * m / groups);
        const int dv = static_cast<int>(static_cast<std::int64_t>(g) * m * 618034 / 1000000 % m);
        const Direction dir = directions[static_cast<std::size_t>(g / DetailTree::kEmbedBands)];
        const int band = g % DetailTree::kEmbedBands;
        for (int r = 0; r < m * m; ++r, ++ordinal) {
            const int u = (r / m + du) % m;
            const int v = (r % m + dv) % m;
            const int bit = static_cast<int>(ordinal % bits);
            bit_slots_[static_cast<std::size_t>(bit)].push_back(static_cast<int>(slots_.size()));
            slots_.push_back({dir, band, u, v, bit});
        }
    }
}

double remainder_mod(double c, double q)
{
    double r = std::fmod(c, q);
    if (r < 0.0)
        r += q;
    if (r >= q)
        r = 0.0;
    return r;
}

double normalization_scale(const GridModel& m, const EmbedConfig& cfg)
{
    return robust_scale(reference_surface(m, cfg.directions));
}

double quantize_embed_bit(double c, int bit, const EmbedConfig& cfg)
{
    const double q = cfg.q;
    const double target = bit ? cfg.r1() : cfg.r0();
    const double base = c - remainder_mod(c, q) + target;
    double best = base;
    for (double cand : {base - q, base + q})
        if (std::abs(cand - c) < std::abs(best - c))
            best = cand;
    return best;
}

int read_bit(double c, const EmbedConfig& cfg)
{
    return remainder_mod(c, cfg.q) > cfg.threshold() ? 1 : 0;
}

namespace {

struct Analysis {
    double scale;
    WeightField weights;
};

Analysis analyze(const GridModel& m, const EmbedConfig& cfg)
{
    const GridModel ref = reference_surface(m, cfg.directions);
    return {robust_scale(ref), compute_weights(ref, cfg.system())};
}

} // namespace

EmbedReport embed_detailed(const GridModel& m, const WatermarkBitmap& wm, const EmbedConfig& cfg)
{
    cfg.validate();
    m.validate();
    const WatermarkBitmap scrambled = scramble(wm, ArnoldKey{cfg.key});
    const Analysis an = analyze(m, cfg);
    const SlotMap map(m.n, wm.w, cfg.directions);

    EmbedReport rep;
    rep.scale = an.scale;
    rep.needed = wm.w * wm.w;
    for (const Slot& s : map.slots())
        rep.eligible_slots += an.weights.eligible_at(s.u, s.v) ? 1 : 0;
    if (rep.eligible_slots < rep.needed)
        throw Error(ErrorCode::InsufficientCapacity, "eligible slots " + std::to_string(rep.eligible_slots) +
                                                         " < watermark bits " + std::to_string(rep.needed));
    for (const auto& idx : map.bit_slots()) {
        bool any = false;
        for (int k : idx) {
            const Slot& s = map.slots()[static_cast<std::size_t>(k)];
            any = any || an.weights.eligible_at(s.u, s.v);
        }
        rep.silent_bits += any ? 0 : 1;
    }

    rep.model = m;
    for (Direction d : cfg.directions) {
        DetailTree t = decompose3(m[d]);
        for (const Slot& s : map.slots()) {
            if (s.direction != d || !an.weights.eligible_at(s.u, s.v))
                continue;
            double& c = t.embed_band(s.band)(s.u, s.v);
            const int bit = scrambled.bits[static_cast<std::size_t>(s.bit)];
            c = quantize_embed_bit(c / an.scale, bit, cfg) * an.scale;
        }
        rep.model[d] = reconstruct3(t);
    }
    return rep;
}

GridModel embed(const GridModel& m, const WatermarkBitmap& wm, const EmbedConfig& cfg)
{
    return embed_detailed(m, wm, cfg).model;
}

ExtractReport extract_detailed(const GridModel& m, int w, const EmbedConfig& cfg)
{
    cfg.validate();
    m.validate();
    const Analysis an = analyze(m, cfg);
    const SlotMap map(m.n, w, cfg.directions);

    std::vector<DetailTree> trees;
    trees.reserve(cfg.directions.size());
    for (Direction d : cfg.directions)
        trees.push_back(decompose3(m[d]));
    auto tree_for = [&](Direction d) -> const DetailTree& {
        for (std::size_t i = 0; i < cfg.directions.size(); ++i)
            if (cfg.directions[i] == d)
                return trees[i];
        throw Error(ErrorCode::BadParameter, "direction not configured");
    };

    ExtractReport rep;
    rep.scale = an.scale;
    rep.scrambled = WatermarkBitmap(w);
    for (int bit = 0; bit < map.bits(); ++bit) {
        int ones = 0;
        int votes = 0;
        for (int k : map.bit_slots()[static_cast<std::size_t>(bit)]) {
            const Slot& s = map.slots()[static_cast<std::size_t>(k)];
            if (!an.weights.eligible_at(s.u, s.v))
                continue;
            ++votes;
            ones += read_bit(tree_for(s.direction).embed_band(s.band)(s.u, s.v) / an.scale, cfg);
        }
        rep.eligible_slots += votes;
        if (votes == 0)
            ++rep.silent_bits;
        // Ties resolve to 1; no votes leaves 0.
        rep.scrambled.bits[static_cast<std::size_t>(bit)] = (votes > 0 && 2 * ones >= votes) ? 1 : 0;
    }
    rep.watermark = unscramble(rep.scrambled, ArnoldKey{cfg.key});
    return rep;
}

WatermarkBitmap extract(const GridModel& m, int w, const EmbedConfig& cfg)
{
    return extract_detailed(m, w, cfg).watermark;
}

} // namespace gridmark
