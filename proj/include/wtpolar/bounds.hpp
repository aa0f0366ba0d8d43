#pragma once

#include <cmath>

#include "wtpolar/profile.hpp"

namespace wtpolar {

// Finite-n constants of the distribution-approximation and leakage bounds.
// The layer count ell is 3 (one common and two outer encoding layers).
struct BoundReport {
    int n = 0;
    int L = 1;
    int ell = 3;
    double delta_n = 0;
    double delta_star = 0;   // total-variation bound per block
    double delta_S = 0;      // leakage bound per block
    double L_delta_S = 0;    // leakage bound over the whole chain
};

inline BoundReport bound_report(int n, double beta, int L, int ell = 3) {
    BoundReport b;
    b.n = n;
    b.L = L;
    b.ell = ell;
    b.delta_n = std::exp2(-std::pow(static_cast<double>(n), beta));
    double t = std::sqrt(ell * n * b.delta_n * 2.0 * std::log(2.0));
    double inner = 2.0 * t * (ell * n - std::log2(t)) + b.delta_n;
    b.delta_star = n * std::cbrt(inner) + std::sqrt(3.0) * std::sqrt(n * b.delta_n * 2.0 * std::log(2.0));
    b.delta_S = 3.0 * n * b.delta_n + 2.0 * b.delta_star * (3.0 * n - std::log2(b.delta_star));
    b.L_delta_S = L * b.delta_S;
    return b;
}

inline BoundReport bound_report(const CodeConfig& cfg, int ell = 3) {
    return bound_report(cfg.n, cfg.beta, cfg.L, ell);
}

}  // namespace wtpolar
