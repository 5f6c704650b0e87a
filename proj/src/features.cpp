#include "gridmark/features.hpp"

#include "gridmark/error.hpp"
#include "gridmark/wavelet.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace gridmark {

namespace {

Eigen::Vector3d point(const GridModel& m, int i, int j)
{
    return {m[Direction::X1](i, j), m[Direction::X2](i, j), m[Direction::X3](i, j)};
}

} // namespace

int WeightField::eligible_blocks() const
{
    return static_cast<int>(std::count(eligible.begin(), eligible.end(), std::uint8_t{1}));
}

GridModel reference_surface(const GridModel& m, std::span<const Direction> directions)
{
    m.validate();
    GridModel ref = m;
    for (Direction d : directions) {
        DetailTree t = decompose3(m[d]);
        for (int b = 0; b < DetailTree::kEmbedBands; ++b)
            t.embed_band(b).setZero();
        ref[d] = reconstruct3(t);
    }
    return ref;
}

BlockFeatures block_features(const GridModel& ref, int u, int v)
{
    const int blocks = ref.n / kBlockSide;
    if (u < 0 || v < 0 || u >= blocks || v >= blocks)
        throw Error(ErrorCode::DimensionError, "block (" + std::to_string(u) + ", " + std::to_string(v) +
                                                   ") outside the " + std::to_string(blocks) + "-block grid");
    const int i0 = u * kBlockSide;
    const int j0 = v * kBlockSide;
    BlockFeatures f;

    double lap = 0.0;
    for (int i = i0 + 1; i < i0 + kBlockSide - 1; ++i)
        for (int j = j0 + 1; j < j0 + kBlockSide - 1; ++j)
            lap += (point(ref, i - 1, j) + point(ref, i + 1, j) + point(ref, i, j - 1) + point(ref, i, j + 1) -
                    4.0 * point(ref, i, j))
                       .norm();
    f.curvature = lap / ((kBlockSide - 2) * (kBlockSide - 2));

    for (int i = i0; i < i0 + kBlockSide - 1; ++i) {
        for (int j = j0; j < j0 + kBlockSide - 1; ++j) {
            const Eigen::Vector3d p00 = point(ref, i, j);
            const Eigen::Vector3d p10 = point(ref, i + 1, j);
            const Eigen::Vector3d p11 = point(ref, i + 1, j + 1);
            const Eigen::Vector3d p01 = point(ref, i, j + 1);
            f.area += 0.5 * (p10 - p00).cross(p11 - p00).norm();
            f.area += 0.5 * (p11 - p00).cross(p01 - p00).norm();
        }
    }

    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (int i = i0; i < i0 + kBlockSide; ++i)
        for (int j = j0; j < j0 + kBlockSide; ++j)
            mean += point(ref, i, j);
    mean /= kBlockSide * kBlockSide;
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (int i = i0; i < i0 + kBlockSide; ++i)
        for (int j = j0; j < j0 + kBlockSide; ++j) {
            const Eigen::Vector3d d = point(ref, i, j) - mean;
            cov += d * d.transpose();
        }
    cov /= kBlockSide * kBlockSide;
    // Smallest eigenvalue = mean squared distance to the best-fit plane.
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov, Eigen::EigenvaluesOnly);
    f.bumpiness = std::sqrt(std::max(0.0, eig.eigenvalues()(0)));
    return f;
}

FeatureField raw_features(const GridModel& ref)
{
    ref.validate();
    FeatureField ff;
    ff.m = ref.n / kBlockSide;
    ff.blocks.resize(static_cast<std::size_t>(ff.m) * ff.m);
    for (int u = 0; u < ff.m; ++u)
        for (int v = 0; v < ff.m; ++v)
            ff.at(u, v) = block_features(ref, u, v);
    return ff;
}

double percentile(std::vector<double> values, double p)
{
    if (values.empty())
        throw Error(ErrorCode::BadParameter, "percentile of an empty set");
    std::sort(values.begin(), values.end());
    const double pos = std::clamp(p, 0.0, 100.0) / 100.0 * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

FeatureField normalize_features(const FeatureField& raw)
{
    FeatureField out = raw;
    auto channel = [&](double BlockFeatures::*field) {
        std::vector<double> values;
        values.reserve(raw.blocks.size() * DetailTree::kEmbedBands);
        for (const auto& b : raw.blocks)
            values.insert(values.end(), DetailTree::kEmbedBands, b.*field);
        const double p5 = percentile(values, 5.0);
        const double p95 = percentile(std::move(values), 95.0);
        for (auto& b : out.blocks)
            b.*field = p95 == p5 ? 0.5 : std::clamp((b.*field - p5) / (p95 - p5), 0.0, 1.0);
    };
    channel(&BlockFeatures::curvature);
    channel(&BlockFeatures::area);
    channel(&BlockFeatures::bumpiness);
    return out;
}

bool is_embedding_class(const FuzzySystem& sys, double w)
{
    const std::string& c = sys.weight_class(w);
    return c == "HIGH" || c == "HIGHER";
}

WeightField compute_weights(const GridModel& ref, const FuzzySystem& sys)
{
    WeightField wf;
    wf.normalized = normalize_features(raw_features(ref));
    wf.m = wf.normalized.m;
    wf.weight.resize(wf.normalized.blocks.size());
    wf.eligible.resize(wf.normalized.blocks.size());
    for (std::size_t k = 0; k < wf.normalized.blocks.size(); ++k) {
        const BlockFeatures& f = wf.normalized.blocks[k];
        wf.weight[k] = sys.evaluate(f.curvature, f.bumpiness, f.area);
        wf.eligible[k] = is_embedding_class(sys, wf.weight[k]) ? 1 : 0;
    }
    return wf;
}

std::string weight_field_csv(const WeightField& wf)
{
    std::string out = "subband,u,v,curvature,area,bumpiness,weight,eligible\n";
    for (int b = 0; b < DetailTree::kEmbedBands; ++b) {
        for (int u = 0; u < wf.m; ++u) {
            for (int v = 0; v < wf.m; ++v) {
                const BlockFeatures& f = wf.normalized.at(u, v);
                out += embed_band_path(b) + "," + std::to_string(u) + "," + std::to_string(v) + "," +
                       format_double(f.curvature) + "," + format_double(f.area) + "," + format_double(f.bumpiness) +
                       "," + format_double(wf.weight_at(u, v)) + "," + (wf.eligible_at(u, v) ? "1" : "0") + "\n";
            }
        }
    }
    return out;
}

} // namespace gridmark
