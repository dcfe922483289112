#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace secswipt {

using Scalar = double;
using Complex = std::complex<Scalar>;
using Index = Eigen::Index;

using VecR = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using MatR = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using VecC = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
using MatC = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

inline constexpr Scalar kPi = 3.14159265358979323846;
inline constexpr Scalar kTwoPi = 2.0 * kPi;
inline constexpr Scalar kLn2 = 0.69314718055994530942;

inline Scalar dbm_to_watt(Scalar dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline Scalar db_to_linear(Scalar db) { return std::pow(10.0, db / 10.0); }
inline Scalar log2p1(Scalar x) { return std::log2(1.0 + x); }

}  // namespace secswipt
