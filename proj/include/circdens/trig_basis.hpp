#pragma once

#include <cmath>
#include <cstddef>

#include "circdens/angles.hpp"

namespace circdens {

//! sup-norm constant of the trigonometric sieve: phi_0 = 1/sqrt(2*pi).
inline const double kPhi0 = 1.0 / std::sqrt(two_pi);
inline const double kInvSqrtPi = 1.0 / std::sqrt(std::numbers::pi);

//! Dimension of the order-m trigonometric space: D_m = 2m + 1.
inline std::size_t sieve_dimension(std::size_t m) { return 2 * m + 1; }

//! Largest admissible order for a sample of size n: floor(n/2) - 1.
//! The model set is {1, ..., max_order(n)}, nonempty for n >= 4.
inline std::size_t max_order(std::size_t n) {
    const std::size_t h = n / 2;
    return h >= 2 ? h - 1 : 0;
}

//! Orthonormal trigonometric basis on [0, 2*pi):
//!   phi_0      = 1/sqrt(2*pi)
//!   phi_{2j-1} = cos(j x)/sqrt(pi)
//!   phi_{2j}   = sin(j x)/sqrt(pi)
inline double trig_basis_eval(std::size_t lambda, Angle x) {
    if (lambda == 0) return kPhi0;
    const std::size_t j = (lambda + 1) / 2;
    const double arg = static_cast<double>(j) * x.radians();
    return (lambda % 2 == 1 ? std::cos(arg) : std::sin(arg)) * kInvSqrtPi;
}

}  // namespace circdens
