#pragma once

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "circdens/angles.hpp"
#include "circdens/bessel.hpp"
#include "circdens/rng.hpp"

namespace circdens {

struct VonMises {
    Angle mu;
    double kappa = 0.0;  // concentration, >= 0
};

struct UniformCircle {};

struct PointMass {
    Angle at;
};

struct Mixture;

using CircularDistribution =
    std::variant<VonMises, Mixture, UniformCircle, PointMass>;

struct Mixture {
    std::vector<std::pair<double, CircularDistribution>> components;
};

//! von Mises density exp(kappa*cos(x - mu)) / (2*pi*I0(kappa)).
inline double vonmises_pdf(Angle mu, double kappa, Angle x) {
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
        throw std::domain_error("vonmises_pdf: kappa must be finite and >= 0");
    }
    return std::exp(kappa * std::cos(x.radians() - mu.radians())) /
           (two_pi * bessel_i0(kappa));
}

//! Throws std::invalid_argument when the distribution is malformed
//! (mixture weights must be in [0,1] and sum to 1 within 1e-12).
inline void validate(const CircularDistribution& dist) {
    if (const auto* vm = std::get_if<VonMises>(&dist)) {
        if (!(vm->kappa >= 0.0) || !std::isfinite(vm->kappa)) {
            throw std::invalid_argument("VonMises: bad concentration");
        }
    } else if (const auto* mix = std::get_if<Mixture>(&dist)) {
        if (mix->components.empty()) {
            throw std::invalid_argument("Mixture: no components");
        }
        double total = 0.0;
        for (const auto& [w, comp] : mix->components) {
            if (!(w >= 0.0 && w <= 1.0)) {
                throw std::invalid_argument("Mixture: weight outside [0,1]");
            }
            total += w;
            validate(comp);
        }
        if (std::abs(total - 1.0) > 1e-12) {
            throw std::invalid_argument("Mixture: weights must sum to 1");
        }
    }
}

//! Density at x. PointMass has no density.
inline double density(const CircularDistribution& dist, Angle x) {
    struct Visitor {
        Angle x;
        double operator()(const VonMises& vm) const {
            return vonmises_pdf(vm.mu, vm.kappa, x);
        }
        double operator()(const Mixture& mix) const {
            double value = 0.0;
            for (const auto& [w, comp] : mix.components) {
                value += w * density(comp, x);
            }
            return value;
        }
        double operator()(const UniformCircle&) const { return 1.0 / two_pi; }
        double operator()(const PointMass&) const {
            throw std::invalid_argument("density: point mass has no density");
        }
    };
    return std::visit(Visitor{x}, dist);
}

namespace detail {

//! Best-Fisher rejection sampler with a wrapped-Cauchy envelope.
inline double sample_vonmises(double mu, double kappa, Rng& rng) {
    if (kappa < 1e-10) return rng.uniform(0.0, two_pi);
    const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
    const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
    const double r = (1.0 + rho * rho) / (2.0 * rho);
    for (;;) {
        const double u1 = rng.uniform();
        const double u2 = rng.uniform();
        const double z = std::cos(std::numbers::pi * u1);
        const double f = (1.0 + r * z) / (r + z);
        const double c = kappa * (r - f);
        if (c * (2.0 - c) - u2 > 0.0 ||
            std::log(c / u2) + 1.0 - c >= 0.0) {
            const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
            return mu + sign * std::acos(f);
        }
    }
}

}  // namespace detail

//! One draw from dist; deterministic given the rng state.
inline Angle sample_angle(const CircularDistribution& dist, Rng& rng) {
    struct Visitor {
        Rng& rng;
        Angle operator()(const VonMises& vm) const {
            return Angle::wrap(
                detail::sample_vonmises(vm.mu.radians(), vm.kappa, rng));
        }
        Angle operator()(const Mixture& mix) const {
            const double u = rng.uniform();
            double acc = 0.0;
            for (const auto& [w, comp] : mix.components) {
                acc += w;
                if (u < acc) return sample_angle(comp, rng);
            }
            return sample_angle(mix.components.back().second, rng);
        }
        Angle operator()(const UniformCircle&) const {
            return Angle::wrap(rng.uniform(0.0, two_pi));
        }
        Angle operator()(const PointMass& pm) const { return pm.at; }
    };
    return std::visit(Visitor{rng}, dist);
}

}  // namespace circdens
