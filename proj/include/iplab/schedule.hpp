#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace iplab {

/// Geometric tolerance schedule driving the sequence builder. The first
/// iteration is pinned at eps(1) = 2 and delta(1) = 4(k+1); later values
/// decay geometrically, strictly positive with limit zero. zeta defaults
/// to zero: cover centers live exactly on the target path.
struct ToleranceSchedule {
    double eps_decay = 0.5;
    double delta_decay = 0.5;
    double zeta0 = 0.0;
    double zeta_decay = 0.5;

    void validate() const {
        if (!(eps_decay > 0.0 && eps_decay < 1.0))
            throw std::invalid_argument("ToleranceSchedule: eps_decay must be in (0,1)");
        if (!(delta_decay > 0.0 && delta_decay < 1.0))
            throw std::invalid_argument("ToleranceSchedule: delta_decay must be in (0,1)");
        if (zeta0 < 0.0) throw std::invalid_argument("ToleranceSchedule: zeta0 must be >= 0");
        if (!(zeta_decay > 0.0 && zeta_decay < 1.0))
            throw std::invalid_argument("ToleranceSchedule: zeta_decay must be in (0,1)");
    }

    double eps(std::uint64_t i) const { return 2.0 * std::pow(eps_decay, double(i - 1)); }
    double delta(std::uint64_t i, std::size_t k) const {
        return 4.0 * double(k + 1) * std::pow(delta_decay, double(i - 1));
    }
    double zeta(std::uint64_t i) const { return zeta0 * std::pow(zeta_decay, double(i - 1)); }
};

/// Window-start function n -> kappa(n) for the windowed estimator and the
/// slow builder variant: nondecreasing, 1 <= kappa(n) <= n, divergent.
struct KappaFn {
    enum class Kind { Sqrt, Identity };
    Kind kind = Kind::Sqrt;

    std::uint64_t operator()(std::uint64_t n) const {
        switch (kind) {
            case Kind::Identity:
                return n;
            case Kind::Sqrt:
            default: {
                auto r = static_cast<std::uint64_t>(std::ceil(std::sqrt(double(n))));
                while (r > 1 && (r - 1) * (r - 1) >= n) --r;  // exact ceil(sqrt)
                while (r * r < n) ++r;
                return r == 0 ? 1 : r;
            }
        }
    }

    const char* name() const { return kind == Kind::Identity ? "identity" : "sqrt"; }
};

}  // namespace iplab
