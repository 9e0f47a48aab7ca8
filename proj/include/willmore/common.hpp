// Basic shared types and helpers for the willmore library.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace willmore {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Field = Eigen::ArrayXd;  // one scalar value per quadrature node

inline constexpr double PI = 3.14159265358979323846264338327950288;

// Rank-3 / rank-4 ambient tensors at a single point (indices 0..2 each).
using Tens3 = std::array<Mat3, 3>;                 // T[c](a,b)
using Tens4 = std::array<std::array<Mat3, 3>, 3>;  // T[c][d](a,b)

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

inline double sqr(double x) { return x * x; }
inline double cube(double x) { return x * x * x; }

}  // namespace willmore
