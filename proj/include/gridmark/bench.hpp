#pragma once

#include "gridmark/attacks.hpp"
#include "gridmark/codec.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gridmark {

struct BenchRow {
    std::string attack; // "none" for the unattacked row
    std::string params;
    // Empty when the extracted bitmap is constant (corr2 undefined).
    std::optional<double> correlation;
    double ber = 0.0;
    double psnr_db = 0.0; // embed-time PSNR, identical on every row
    std::string watermark_path;
    WatermarkBitmap extracted;
};

struct BenchReport {
    std::string model_id;
    int n = 0;
    int w = 0;
    std::string config_hash;
    std::vector<BenchRow> rows;
};

// none, gaussian(3,10), gaussian(7,10), laplacian(1), log(5,0.5),
// saltpepper(0.05), saltpepper(0.1), randomnoise(0.1), crop(0.09),
// crop(0.16), translate, scale(2), rotate(z, pi/6).
std::vector<AttackSpec> default_battery();

BenchReport run_bench(const GridModel& model, const WatermarkBitmap& wm, const EmbedConfig& cfg,
                      std::span<const AttackSpec> extra = {}, const std::string& model_id = "model");

// Rotations and translations are registered before extraction.
WatermarkBitmap attack_and_extract(const GridModel& watermarked, const AttackSpec& a, int w, const EmbedConfig& cfg);

// Columns attack,params,correlation,ber,psnr_db,watermark_path after
// '#'-prefixed metadata lines.
std::string bench_csv(const BenchReport& r);
BenchReport parse_bench_csv(std::string_view text);
std::string bench_markdown(const BenchReport& r);

// CSV, markdown and every extracted PBM; nothing is written if any step fails.
void write_bench(const BenchReport& r, const std::filesystem::path& dir);

} // namespace gridmark
