#pragma once

#include <array>
#include <utility>
#include <vector>

#include "dicke/dicke_table.hpp"
#include "dicke/model.hpp"
#include "dicke/symbasis.hpp"

namespace dicke {

// <J_11>, certified against the oracle.
double tls_excitation(const SymBasis& basis, const ReducedState& s);

// (<b+b>, <b+b+bb>)
std::pair<double, double> photon_moments(const SymBasis& basis, const ReducedState& s);

struct G2 {
    double value = 0.0;
    bool defined = false;  // undefined at (numerical) vacuum
};

G2 g2_zero(const SymBasis& basis, const ReducedState& s, double eps = 1e-10);

// First and second moments of the collective spin, from symmetric elements
// with n10 + n01 <= 2.
struct SpinMoments {
    double jx = 0, jy = 0, jz = 0;
    double jx2 = 0, jy2 = 0, jz2 = 0;
    double var_jx() const { return jx2 - jx * jx; }
    double var_jy() const { return jy2 - jy * jy; }
    double var_jz() const { return jz2 - jz * jz; }
};

SpinMoments collective_second_moments(const SymBasis& basis, const ReducedState& s);

// Left-hand sides of the four spin squeezing inequalities; a positive value
// witnesses entanglement. Evaluated in the rotating frame at the t = 0 phase
// convention. ssi_A is the first entry, the quantity
// <Jy^2> + <Jz^2> - N/2 - (N-1) Var(Jx).
std::array<double, 4> ssi_all(const SpinMoments& m, int N);
double ssi_A(const SpinMoments& m, int N);

// Phase-averaged sums of SSI pairs (1+2, 3+4). Time independent in any
// frame, but a strictly weaker witness; exposed for completeness only.
std::array<double, 2> ssi_summed(const SpinMoments& m, int N);

// Everything at once; the row schema of all output files.
struct ObservableRecord {
    double n_tls = 0, n_tls_norm = 0;
    double m_ph = 0, output_rate = 0;
    G2 g2;
    SpinMoments spin;
    std::array<double, 4> ssi{};
    double A = 0;
    std::vector<std::pair<int, double>> subspace_pop;  // (twol, sum_m p(l,m))
    std::vector<std::pair<int, RValue>> R_by_l;        // (twol, R(l))
    std::vector<std::pair<int, double>> dark_pop;      // (twol, p(l,-l))
};

ObservableRecord evaluate_observables(const SymBasis& basis, const DickeCoeffTable& table,
                                      const ReducedState& s, double kappa);

}  // namespace dicke
