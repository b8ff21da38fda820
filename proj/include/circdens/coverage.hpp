#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "circdens/angles.hpp"
#include "circdens/censoring.hpp"

namespace circdens {

//! Empirical coverage: the step function
//!   sigma_hat(x) = (1/n) * #{i : x in [L_i, U_i]}.
//!
//! Membership of a closed circular arc decomposes into order comparisons
//! against the endpoints plus a wrap correction, so the count at x is
//!   #{L_i <= x} - #{U_i < x} + #{L_i >= U_i},
//! evaluated here with two sorted endpoint arrays and binary search. The
//! result is an integer count divided by n, identical to the direct O(n)
//! membership count at every query point, endpoints included.
class CoverageFunction {
public:
    static CoverageFunction build(const CensoredSample& sample) {
        if (sample.n() == 0) {
            throw std::invalid_argument("CoverageFunction: empty sample");
        }
        CoverageFunction cov;
        cov.n_ = sample.n();
        cov.lowers_.reserve(cov.n_);
        cov.uppers_.reserve(cov.n_);
        for (const auto& obs : sample.observations) {
            cov.lowers_.push_back(obs.l.radians());
            cov.uppers_.push_back(obs.u.radians());
            if (obs.l >= obs.u) ++cov.wrap_count_;
        }
        std::sort(cov.lowers_.begin(), cov.lowers_.end());
        std::sort(cov.uppers_.begin(), cov.uppers_.end());
        return cov;
    }

    //! sigma_hat(x), a multiple of 1/n in [0, 1]. O(log n).
    double operator()(Angle x) const {
        const double v = x.radians();
        const std::ptrdiff_t le =
            std::upper_bound(lowers_.begin(), lowers_.end(), v) -
            lowers_.begin();
        const std::ptrdiff_t lt =
            std::lower_bound(uppers_.begin(), uppers_.end(), v) -
            uppers_.begin();
        const std::ptrdiff_t count = le - lt + static_cast<std::ptrdiff_t>(wrap_count_);
        return static_cast<double>(count) / static_cast<double>(n_);
    }

    std::size_t sample_size() const { return n_; }

private:
    std::vector<double> lowers_, uppers_;
    std::size_t wrap_count_ = 0;
    std::size_t n_ = 0;
};

inline CoverageFunction build_coverage(const CensoredSample& sample) {
    return CoverageFunction::build(sample);
}

}  // namespace circdens
