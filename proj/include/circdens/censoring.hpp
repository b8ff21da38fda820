#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "circdens/angles.hpp"
#include "circdens/distributions.hpp"
#include "circdens/rng.hpp"

namespace circdens {

//! L and U drawn independently from their own laws.
struct IndependentPair {
    CircularDistribution law_l;
    CircularDistribution law_u;
};

//! Fixed observation window [l, u] for every observation.
struct DeterministicArc {
    DeterministicArc(Angle l, Angle u) : arc(l, u) {}
    Arc arc;
};

//! L uniform on the circle, U = L - alpha. The complement [U, L] (the
//! censoring arc) has length alpha; the window [L, U] has length 2*pi - alpha.
struct UniformAnchorFixedArc {
    explicit UniformAnchorFixedArc(double alpha_) : alpha(alpha_) {
        if (!(alpha > 0.0 && alpha < two_pi)) {
            throw std::invalid_argument(
                "UniformAnchorFixedArc: alpha must lie in (0, 2*pi)");
        }
    }
    double alpha;
};

using CensoringModel =
    std::variant<IndependentPair, DeterministicArc, UniformAnchorFixedArc>;

//! Draw one observation window. The measure-zero event L == U is resampled;
//! more than 1000 retries means the model is degenerate.
inline Arc draw_censoring_arc(const CensoringModel& model, Rng& rng) {
    struct Visitor {
        Rng& rng;
        Arc operator()(const IndependentPair& pair) const {
            for (int attempt = 0; attempt < 1000; ++attempt) {
                const Angle l = sample_angle(pair.law_l, rng);
                const Angle u = sample_angle(pair.law_u, rng);
                if (l != u) return Arc(l, u);
            }
            throw std::runtime_error(
                "draw_censoring_arc: degenerate model, L == U persists");
        }
        Arc operator()(const DeterministicArc& det) const { return det.arc; }
        Arc operator()(const UniformAnchorFixedArc& ua) const {
            for (int attempt = 0; attempt < 1000; ++attempt) {
                const Angle l = Angle::wrap(rng.uniform(0.0, two_pi));
                const Angle u = Angle::wrap(l.radians() - ua.alpha);
                if (l != u) return Arc(l, u);
            }
            throw std::runtime_error(
                "draw_censoring_arc: degenerate model, L == U persists");
        }
    };
    return std::visit(Visitor{rng}, model);
}

//! One observed triplet: the window endpoints always, the position only when
//! it fell inside the window.
struct CensoredObservation {
    std::optional<Angle> x_prime;  // present iff delta
    bool delta = false;
    Angle l, u;

    Arc window() const { return Arc(l, u); }
};

struct CensoredSample {
    std::vector<CensoredObservation> observations;

    std::size_t n() const { return observations.size(); }
};

//! Generate n triplets: x from dist, window from model, delta by membership.
//! Draw order per observation is x first, then the window.
inline CensoredSample generate_sample(const CircularDistribution& dist,
                                      const CensoringModel& model,
                                      std::size_t n, Rng& rng) {
    if (n == 0) throw std::invalid_argument("generate_sample: n must be >= 1");
    CensoredSample sample;
    sample.observations.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Angle x = sample_angle(dist, rng);
        const Arc arc = draw_censoring_arc(model, rng);
        const bool delta = arc_contains(arc, x);
        CensoredObservation obs;
        obs.delta = delta;
        obs.l = arc.lower();
        obs.u = arc.upper();
        if (delta) obs.x_prime = x;
        sample.observations.push_back(obs);
    }
    return sample;
}

}  // namespace circdens
