#pragma once

#include "gridmark/arnold.hpp"
#include "gridmark/features.hpp"
#include "gridmark/fuzzy.hpp"
#include "gridmark/model_io.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace gridmark {

struct EmbedConfig {
    int key = 5;
    // Quantization step in normalized coefficient units.
    double q = 0.005;
    std::vector<Direction> directions{Direction::X1, Direction::X2};
    // Empty means the built-in default rule base.
    std::string rules_path;
    std::string rules_text{default_rules_text()};

    double r1() const { return 0.75 * q; }
    double r0() const { return 0.25 * q; }
    double threshold() const { return 0.5 * q; }

    void validate() const;
    FuzzySystem system() const { return load_standard_system(rules_text); }
};

/// key=value lines: key, q, directions (comma list), rules (path, resolved
/// against base_dir). Unknown keys are rejected.
EmbedConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
EmbedConfig load_config(const std::filesystem::path& path);
std::string format_config(const EmbedConfig& cfg);
// FNV-1a of the canonical config text and the rule base.
std::string config_hash(const EmbedConfig& cfg);

struct Slot {
    Direction direction;
    int band; // canonical embedding band 0..7
    int u;
    int v;
    int bit;
};

/// Fixed slot ordering determined by (N, W, directions) only. Slots are
/// grouped by (direction, band); group g walks its (N/8)^2 coefficients in
/// raster order from a toroidal origin offset that depends on g, and slot
/// ordinal k carries bit k mod W^2. The offsets place the copies of one bit
/// in distinct, spread-out blocks.
class SlotMap {
public:
    SlotMap(int n, int w, std::span<const Direction> directions);

    const std::vector<Slot>& slots() const { return slots_; }
    // Slot indices carrying each bit.
    const std::vector<std::vector<int>>& bit_slots() const { return bit_slots_; }
    int bits() const { return static_cast<int>(bit_slots_.size()); }

private:
    std::vector<Slot> slots_;
    std::vector<std::vector<int>> bit_slots_;
};

// Mathematical modulo: result in [0, q).
double remainder_mod(double c, double q);

double normalization_scale(const GridModel& m, const EmbedConfig& cfg);
double quantize_embed_bit(double c, int bit, const EmbedConfig& cfg);
int read_bit(double c, const EmbedConfig& cfg);

struct EmbedReport {
    GridModel model;
    double scale = 0.0;
    int eligible_slots = 0;
    int needed = 0;
    int silent_bits = 0; // bits with no eligible slot; extraction reads them as 0
};

EmbedReport embed_detailed(const GridModel& m, const WatermarkBitmap& wm, const EmbedConfig& cfg);
GridModel embed(const GridModel& m, const WatermarkBitmap& wm, const EmbedConfig& cfg);

struct ExtractReport {
    WatermarkBitmap watermark;
    WatermarkBitmap scrambled;
    double scale = 0.0;
    int eligible_slots = 0;
    int silent_bits = 0; // bits with no eligible slot, decoded as 0
};

ExtractReport extract_detailed(const GridModel& m, int w, const EmbedConfig& cfg);
WatermarkBitmap extract(const GridModel& m, int w, const EmbedConfig& cfg);

} // namespace gridmark
