#pragma once

#include "gridmark/matrix.hpp"
#include "gridmark/model_io.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

namespace gridmark {

namespace attack {

struct Rotate {
    Eigen::Vector3d axis{0.0, 0.0, 1.0};
    double angle = 0.0; // radians
};
struct Translate {
    double dx = 0.0, dy = 0.0, dz = 0.0;
};
struct Scale {
    double k = 1.0;
};
struct RandomNoise {
    double amplitude = 0.0; // fraction of each matrix's value range
    std::uint64_t seed = 1;
};
struct SaltPepper {
    double density = 0.0;
    std::uint64_t seed = 1;
};
struct Gaussian {
    int hsize = 3;
    double sigma = 0.5;
};
struct Laplacian {
    double alpha = 0.2;
};
struct LoG {
    int hsize = 5;
    double sigma = 0.5;
};
struct Crop {
    double p = 0.1;
};

} // namespace attack

using AttackSpec = std::variant<attack::Rotate, attack::Translate, attack::Scale, attack::RandomNoise,
                                attack::SaltPepper, attack::Gaussian, attack::Laplacian, attack::LoG, attack::Crop>;

/// Textual form "name:key=value,...", e.g. gaussian:hsize=3,sigma=10 or
/// rotate:axis=z,angle=1.5708. Names: rotate translate scale randomnoise
/// saltpepper gaussian laplacian log crop. Throws BadParameter.
AttackSpec parse_attack(std::string_view text);
std::string format_attack(const AttackSpec& a);
std::string attack_name(const AttackSpec& a);
std::string attack_params(const AttackSpec& a);
void validate_attack(const AttackSpec& a);

// p -> rotation * p + translation on every grid point.
struct RigidTransform {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();

    RigidTransform inverse() const;
};

GridModel apply_transform(const GridModel& m, const RigidTransform& t);
std::string format_registration(const RigidTransform& t);
RigidTransform parse_registration(std::string_view text);

struct AttackResult {
    GridModel model;
    // Inverse of a rigid attack, for registration before extraction.
    std::optional<RigidTransform> registration;
};

AttackResult apply_attack(const GridModel& m, const AttackSpec& a);

GridModel random_noise(const GridModel& m, double amplitude, std::uint64_t seed);
GridModel salt_pepper(const GridModel& m, double density, std::uint64_t seed);
GridModel crop(const GridModel& m, double p);
int crop_side(int n, double p);

Matrix kernel_gaussian(int hsize, double sigma);
Matrix kernel_laplacian(double alpha);
Matrix kernel_log(int hsize, double sigma);

// Same-size 2D filtering with edge-replicate padding.
Matrix convolve_replicate(const Matrix& m, const Matrix& kernel);

GridModel smooth(const GridModel& m, const attack::Gaussian& a);
GridModel smooth(const GridModel& m, const attack::Laplacian& a);
GridModel smooth(const GridModel& m, const attack::LoG& a);

} // namespace gridmark
