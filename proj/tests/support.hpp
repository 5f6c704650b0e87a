#pragma once

#include "gridmark/matrix.hpp"
#include "gridmark/model_io.hpp"
#include "gridmark/random.hpp"

#include <unistd.h>

#include <filesystem>
#include <string>

namespace testing {

inline gridmark::Matrix random_matrix(int rows, int cols, std::uint64_t seed, double lo = -1.0, double hi = 1.0)
{
    gridmark::Rng rng(seed);
    gridmark::Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            m(i, j) = rng.uniform(lo, hi);
    return m;
}

inline gridmark::GridModel random_model(int n, std::uint64_t seed, double scale = 10.0)
{
    return gridmark::GridModel(random_matrix(n, n, seed, -scale, scale), random_matrix(n, n, seed + 1, -scale, scale),
                               random_matrix(n, n, seed + 2, -scale, scale));
}

inline double max_abs_diff(const gridmark::Matrix& a, const gridmark::Matrix& b)
{
    return (a - b).cwiseAbs().maxCoeff();
}

// Scratch directory removed on scope exit.
class TempDir {
public:
    explicit TempDir(const std::string& tag)
    {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("gridmark_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

} // namespace testing
