#pragma once

#include "gridmark/fuzzy.hpp"
#include "gridmark/model_io.hpp"

#include <span>
#include <string>
#include <vector>

namespace gridmark {

// Spatial block side covered by one level-3 coefficient.
inline constexpr int kBlockSide = 8;

struct BlockFeatures {
    double curvature = 0.0;
    double area = 0.0;
    double bumpiness = 0.0;
};

/// Per-block features on the (N/8) x (N/8) block grid. All eight embedding
/// subbands at coefficient (u, v) share block (u, v), so one entry serves
/// eight slots.
struct FeatureField {
    int m = 0;
    std::vector<BlockFeatures> blocks;

    BlockFeatures& at(int u, int v) { return blocks[static_cast<std::size_t>(u) * m + v]; }
    const BlockFeatures& at(int u, int v) const { return blocks[static_cast<std::size_t>(u) * m + v]; }
};

struct WeightField {
    int m = 0;
    FeatureField normalized;
    std::vector<double> weight;
    std::vector<std::uint8_t> eligible;

    double weight_at(int u, int v) const { return weight[static_cast<std::size_t>(u) * m + v]; }
    bool eligible_at(int u, int v) const { return eligible[static_cast<std::size_t>(u) * m + v] != 0; }
    // Eligible block count; each block contributes eight eligible slots per direction.
    int eligible_blocks() const;
};

/// Zeroes the eight embedding subbands of every listed direction matrix and
/// resynthesizes it; other matrices pass through. Embedding writes only those
/// subbands, so the result is the same before and after embedding.
GridModel reference_surface(const GridModel& m, std::span<const Direction> directions);

/// Raw features of block (u, v), rows 8u..8u+7 and cols 8v..8v+7:
///   curvature  mean norm of the 5-point Laplacian of S over the 6x6 interior
///   area       total area of the 98 triangles (cells split along i = j)
///   bumpiness  RMS orthogonal distance of the 64 points to their
///              total-least-squares plane
BlockFeatures block_features(const GridModel& ref, int u, int v);
FeatureField raw_features(const GridModel& ref);

// Linear-interpolation percentile, p in [0, 100].
double percentile(std::vector<double> values, double p);

// Each channel: clamp((x - p5) / (p95 - p5), 0, 1), or 0.5 if p95 == p5.
// Percentiles run over slots, i.e. every block counted eight times.
FeatureField normalize_features(const FeatureField& raw);

// Eligible iff the crisp weight classifies as HIGH or HIGHER.
bool is_embedding_class(const FuzzySystem& sys, double w);

WeightField compute_weights(const GridModel& ref, const FuzzySystem& sys);

// subband,u,v,curvature,area,bumpiness,weight,eligible; one row per slot.
std::string weight_field_csv(const WeightField& wf);

} // namespace gridmark
