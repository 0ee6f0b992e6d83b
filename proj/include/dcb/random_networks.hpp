#pragma once

// Seeded generators for synthetic networks. Draws use raw 64-bit engine output
// so a seed yields the same numbers on every standard library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "dcb/matrix.hpp"
#include "dcb/network.hpp"

namespace dcb {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform in the closed unit disk scaled by r.
    cplx in_disk(double r = 1.0) {
        return std::polar(r * std::sqrt(uniform()), uniform(0.0, 2.0 * pi));
    }

private:
    std::mt19937_64 engine_;
};

// Largest singular value of a 2x2 complex matrix.
inline double spectral_norm(const CMat2& s) {
    const CMat2 h = adjoint(s) * s;
    const double tr = (h(0, 0) + h(1, 1)).real();
    const double dt = det(h).real();
    const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - dt));
    return std::sqrt(0.5 * tr + disc);
}

// Random reciprocal, strictly passive two-port with |S21| >= min_s21.
inline TwoPortS random_passive_reciprocal(Rng& rng, double z0 = 50.0, double min_s21 = 0.1) {
    for (;;) {
        const cplx s11 = rng.in_disk();
        const cplx s22 = rng.in_disk();
        const cplx s21 = rng.in_disk();
        CMat2 s{s11, s21, s21, s22};
        const double gain = rng.uniform(0.3, 0.95) / spectral_norm(s);
        s *= gain;
        if (std::abs(s(1, 0)) >= min_s21) {
            return {s, z0};
        }
    }
}

// Section of uniform line with impedance z_line, electrical length theta and
// total attenuation alpha (nepers), at reference z0.
inline TwoPortS line_section_s(double z_line, double theta, double alpha, double z0) {
    const double gamma = (z_line - z0) / (z_line + z0);
    const cplx t = std::exp(cplx(-alpha, -theta));
    const cplx den = 1.0 - gamma * gamma * t * t;
    const cplx s11 = gamma * (1.0 - t * t) / den;
    const cplx s21 = t * (1.0 - gamma * gamma) / den;
    return {CMat2{s11, s21, s21, s11}, z0};
}

} // namespace dcb
