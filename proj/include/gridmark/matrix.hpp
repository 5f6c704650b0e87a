#pragma once

#include <Eigen/Core>

namespace gridmark {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

} // namespace gridmark
