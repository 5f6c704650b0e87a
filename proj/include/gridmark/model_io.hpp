#pragma once

#include "gridmark/matrix.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace gridmark {

// The three coordinate matrices of a grid model.
enum class Direction { X1 = 0, X2 = 1, X3 = 2 };

std::string_view direction_name(Direction d) noexcept;
Direction parse_direction(std::string_view name);

// A regular-grid surface: point (i, j) is (x1(i,j), x2(i,j), x3(i,j)).
struct GridModel {
    int n = 0;
    std::array<Matrix, 3> coords;

    GridModel() = default;
    explicit GridModel(int side);
    GridModel(Matrix x1, Matrix x2, Matrix x3);

    Matrix& operator[](Direction d) { return coords[static_cast<int>(d)]; }
    const Matrix& operator[](Direction d) const { return coords[static_cast<int>(d)]; }

    // Throws DimensionError / NonFiniteValue when an invariant is broken.
    void validate() const;
};

// Square binary image, row-major bits in {0, 1}.
struct WatermarkBitmap {
    int w = 0;
    std::vector<std::uint8_t> bits;

    WatermarkBitmap() = default;
    explicit WatermarkBitmap(int side) : w(side), bits(static_cast<std::size_t>(side) * side, 0) {}

    std::uint8_t& at(int r, int c) { return bits[static_cast<std::size_t>(r) * w + c]; }
    std::uint8_t at(int r, int c) const { return bits[static_cast<std::size_t>(r) * w + c]; }
    std::size_t popcount() const;

    friend bool operator==(const WatermarkBitmap&, const WatermarkBitmap&) = default;
};

enum class ModelKind { Plane, Harmonic, Meshgrid, Bumps };

std::string_view model_kind_name(ModelKind k) noexcept;
ModelKind parse_model_kind(std::string_view name);

GridModel load_model(const std::filesystem::path& path);
void save_model(const GridModel& m, const std::filesystem::path& path);
std::string format_model(const GridModel& m);
GridModel parse_model(std::string_view text);

// P1 is canonical; P2 input is thresholded at 128.
WatermarkBitmap load_watermark(const std::filesystem::path& path);
WatermarkBitmap parse_watermark(std::string_view text);
void save_watermark(const WatermarkBitmap& wm, const std::filesystem::path& path);
std::string format_watermark(const WatermarkBitmap& wm);

/// Synthetic stand-in models. All kinds share the planar parameterization
/// x1 = i, x2 = j; they differ in the height field x3.
///   plane    x3 = 0
///   harmonic x3 = product of sines with seeded phases
///   meshgrid x3 = saddle plus a weak cubic term
///   bumps    x3 = seeded sum of Gaussian bumps
GridModel generate_model(ModelKind kind, int n, std::uint64_t seed);

/// Square test watermark: a seeded random pattern when seed != 0, otherwise
/// a deterministic glyph-like pattern (frame, diagonal and a filled disc).
WatermarkBitmap generate_watermark(int w, std::uint64_t seed = 0);

// Wavefront OBJ: n*n vertices, two triangles per grid cell.
void export_obj(const GridModel& m, const std::filesystem::path& path);
std::string format_obj(const GridModel& m);

// Shared text helpers.
std::string format_double(double v);
// Shortest text that reads back to the same double.
std::string format_shortest(double v);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

} // namespace gridmark
