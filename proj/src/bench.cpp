#include "gridmark/bench.hpp"

#include "gridmark/error.hpp"
#include "gridmark/metrics.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace gridmark {

namespace {

std::string fixed6(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::vector<std::string> split_csv_line(std::string_view line)
{
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

double parse_number(const std::string& s)
{
    if (s == "inf")
        return std::numeric_limits<double>::infinity();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw Error(ErrorCode::MalformedFile, "bench CSV: bad number '" + s + "'");
    return v;
}

std::string csv_number(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    return format_double(v);
}

} // namespace

std::vector<AttackSpec> default_battery()
{
    return {
        attack::Gaussian{3, 10.0},
        attack::Gaussian{7, 10.0},
        attack::Laplacian{1.0},
        attack::LoG{5, 0.5},
        attack::SaltPepper{0.05, 1},
        attack::SaltPepper{0.1, 1},
        attack::RandomNoise{0.1, 1},
        attack::Crop{0.09},
        attack::Crop{0.16},
        attack::Translate{12.5, -7.25, 3.0},
        attack::Scale{2.0},
        attack::Rotate{Eigen::Vector3d::UnitZ(), std::numbers::pi / 6.0},
    };
}

WatermarkBitmap attack_and_extract(const GridModel& watermarked, const AttackSpec& a, int w, const EmbedConfig& cfg)
{
    AttackResult res = apply_attack(watermarked, a);
    if (res.registration)
        res.model = apply_transform(res.model, *res.registration);
    return extract(res.model, w, cfg);
}

BenchReport run_bench(const GridModel& model, const WatermarkBitmap& wm, const EmbedConfig& cfg,
                      std::span<const AttackSpec> extra, const std::string& model_id)
{
    const GridModel marked = embed(model, wm, cfg);
    const double db = psnr(model, marked);

    BenchReport rep;
    rep.model_id = model_id;
    rep.n = model.n;
    rep.w = wm.w;
    rep.config_hash = config_hash(cfg);

    auto score = [&](std::string name, std::string params, WatermarkBitmap got) {
        BenchRow row;
        row.attack = std::move(name);
        row.params = std::move(params);
        try {
            row.correlation = corr2(wm, got);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateInput)
                throw;
        }
        row.ber = ber(wm, got);
        row.psnr_db = db;
        char file[64];
        std::snprintf(file, sizeof file, "wm_%02zu_%s.pbm", rep.rows.size(), row.attack.c_str());
        row.watermark_path = file;
        row.extracted = std::move(got);
        rep.rows.push_back(std::move(row));
    };

    score("none", "", extract(marked, wm.w, cfg));
    std::vector<AttackSpec> battery = default_battery();
    battery.insert(battery.end(), extra.begin(), extra.end());
    for (const AttackSpec& a : battery)
        score(attack_name(a), attack_params(a), attack_and_extract(marked, a, wm.w, cfg));
    return rep;
}

std::string bench_csv(const BenchReport& r)
{
    std::string out = "# model=" + r.model_id + "\n";
    out += "# n=" + std::to_string(r.n) + "\n";
    out += "# w=" + std::to_string(r.w) + "\n";
    out += "# config_hash=" + r.config_hash + "\n";
    out += "attack,params,correlation,ber,psnr_db,watermark_path\n";
    for (const BenchRow& row : r.rows) {
        out += csv_field(row.attack) + "," + csv_field(row.params) + ",";
        out += row.correlation ? csv_number(*row.correlation) : std::string("nan");
        out += "," + csv_number(row.ber) + "," + csv_number(row.psnr_db) + "," + csv_field(row.watermark_path) + "\n";
    }
    return out;
}

BenchReport parse_bench_csv(std::string_view text)
{
    BenchReport r;
    bool header = false;
    while (!text.empty()) {
        const std::size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (line.empty())
            continue;
        if (line.front() == '#') {
            line.remove_prefix(1);
            while (!line.empty() && line.front() == ' ')
                line.remove_prefix(1);
            const std::size_t eq = line.find('=');
            if (eq == std::string_view::npos)
                continue;
            const std::string_view k = line.substr(0, eq);
            const std::string v(line.substr(eq + 1));
            if (k == "model")
                r.model_id = v;
            else if (k == "n")
                r.n = static_cast<int>(parse_number(v));
            else if (k == "w")
                r.w = static_cast<int>(parse_number(v));
            else if (k == "config_hash")
                r.config_hash = v;
            continue;
        }
        auto f = split_csv_line(line);
        if (!header) {
            if (line != "attack,params,correlation,ber,psnr_db,watermark_path")
                throw Error(ErrorCode::MalformedFile, "bench CSV: unexpected header");
            header = true;
            continue;
        }
        if (f.size() != 6)
            throw Error(ErrorCode::MalformedFile, "bench CSV: expected 6 fields");
        BenchRow row;
        row.attack = f[0];
        row.params = f[1];
        if (f[2] != "nan")
            row.correlation = parse_number(f[2]);
        row.ber = parse_number(f[3]);
        row.psnr_db = parse_number(f[4]);
        row.watermark_path = f[5];
        r.rows.push_back(std::move(row));
    }
    if (!header)
        throw Error(ErrorCode::MalformedFile, "bench CSV: missing header");
    return r;
}

std::string bench_markdown(const BenchReport& r)
{
    std::string out = "# Results for " + r.model_id + "\n\n";
    out += "N = " + std::to_string(r.n) + ", W = " + std::to_string(r.w) + ", config " + r.config_hash + "\n\n";
    out += "| Attack | Parameters | Correlation | BER | PSNR (dB) | Extracted watermark |\n";
    out += "|---|---|---|---|---|---|\n";
    for (const BenchRow& row : r.rows) {
        out += "| " + row.attack + " | " + (row.params.empty() ? "-" : row.params) + " | ";
        out += row.correlation ? fixed6(*row.correlation) : std::string("n/a");
        out += " | " + fixed6(row.ber) + " | " + fixed6(row.psnr_db) + " | [" + row.watermark_path + "](" +
               row.watermark_path + ") |\n";
    }
    return out;
}

void write_bench(const BenchReport& r, const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw Error(ErrorCode::IoError, "cannot create '" + dir.string() + "': " + ec.message());
    for (const BenchRow& row : r.rows)
        save_watermark(row.extracted, dir / row.watermark_path);
    write_text_file(dir / "report.md", bench_markdown(r));
    write_text_file(dir / "report.csv", bench_csv(r));
}

} // namespace gridmark
