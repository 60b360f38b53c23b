#ifndef KG_TYPES_HPP
#define KG_TYPES_HPP

#include <complex>
#include <cstdint>

#include <Eigen/Core>

namespace kg {

using Complex = std::complex<double>;
using ComplexArray = Eigen::ArrayXcd;
using RealArray = Eigen::ArrayXd;
using Index = std::int64_t;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace kg

#endif
