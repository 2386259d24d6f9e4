#pragma once
// Hydrogen-atom observables in internal units (hbar = mu = kappa = 1, so
// the Bohr radius is 1 and E_n = -1/(2 n^2)).

#include <stdexcept>

#include <gphase/expr.hpp>

namespace gphase::hydrogen {

inline PhaseExpr kinetic() {
    PhaseExpr t;
    for (int i = 1; i <= 3; ++i) t += PhaseExpr::p(i) * PhaseExpr::p(i);
    return Rational(1, 2) * t;
}

// H = |p|^2 / 2 - 1/r
inline PhaseExpr hamiltonian() { return kinetic() - PhaseExpr::r_power(-1); }

// L_i = eps_ijk q_j p_k
inline PhaseExpr angular_momentum(int i) {
    if (i < 1 || i > 3) throw std::invalid_argument("component index must be 1..3");
    int j = i % 3 + 1, k = j % 3 + 1;
    return PhaseExpr::q(j) * PhaseExpr::p(k) - PhaseExpr::q(k) * PhaseExpr::p(j);
}

// A_i = (p x L)_i - q_i / r
inline PhaseExpr runge_lenz(int i) {
    if (i < 1 || i > 3) throw std::invalid_argument("component index must be 1..3");
    int j = i % 3 + 1, k = j % 3 + 1;
    return PhaseExpr::p(j) * angular_momentum(k) - PhaseExpr::p(k) * angular_momentum(j) -
           PhaseExpr::r_power(-1) * PhaseExpr::q(i);
}

} // namespace gphase::hydrogen
