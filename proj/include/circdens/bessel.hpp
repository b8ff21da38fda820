#pragma once

#include <cmath>
#include <stdexcept>

namespace circdens {

//! Modified Bessel function of the first kind, order 0.
//! Power series with all-positive terms; relative accuracy near machine
//! precision for k up to a few hundred.
inline double bessel_i0(double k) {
    if (!(k >= 0.0) || !std::isfinite(k)) {
        throw std::domain_error("bessel_i0: k must be finite and >= 0");
    }
    const double q = 0.25 * k * k;
    double term = 1.0;
    double sum = 1.0;
    for (int j = 1; j < 2000; ++j) {
        term *= q / (static_cast<double>(j) * static_cast<double>(j));
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return sum;
}

//! Modified Bessel function of the first kind, order 1.
inline double bessel_i1(double k) {
    if (!(k >= 0.0) || !std::isfinite(k)) {
        throw std::domain_error("bessel_i1: k must be finite and >= 0");
    }
    const double q = 0.25 * k * k;
    double term = 0.5 * k;
    double sum = term;
    for (int j = 1; j < 2000; ++j) {
        term *= q / (static_cast<double>(j) * static_cast<double>(j + 1));
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return sum;
}

//! Mean resultant length of a von Mises distribution: A(k) = I1(k)/I0(k).
//! Strictly increasing on [0, inf), A(0) = 0, A(k) -> 1.
inline double bessel_ratio(double k) {
    if (k == 0.0) return 0.0;
    return bessel_i1(k) / bessel_i0(k);
}

//! Inverse of bessel_ratio by safeguarded Newton iteration with a bisection
//! fallback; the bracket upper bound grows with R so the inverse is accurate
//! over the whole range the callers use. Uses A'(k) = 1 - A(k)^2 - A(k)/k.
inline double invert_bessel_ratio(double resultant) {
    if (!(resultant >= 0.0) || resultant >= 1.0 || !std::isfinite(resultant)) {
        throw std::domain_error("invert_bessel_ratio: need 0 <= R < 1");
    }
    if (resultant == 0.0) return 0.0;
    double lo = 0.0;
    double hi = 2.0 / (1.0 - resultant);  // A(k) ~ 1 - 1/(2k), so A(hi) > R
    while (bessel_ratio(hi) < resultant) hi *= 2.0;
    // Newton from the midpoint; step clipped to the shrinking bracket.
    double k = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double a = bessel_ratio(k);
        const double err = a - resultant;
        if (std::abs(err) < 1e-14) break;
        if (err > 0.0) hi = k; else lo = k;
        const double da = 1.0 - a * a - a / k;
        double next = (da > 0.0) ? k - err / da : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == k) break;
        k = next;
    }
    return k;
}

}  // namespace circdens
