#pragma once

#include <iosfwd>
#include <map>
#include <vector>

#include "dicke/symbasis.hpp"

namespace dicke {

// Expansion coefficients a_k of the (J^2, J_z) eigenspace projectors over
// symmetric elements P[n-k, k, k] with n = m + N/2:
//
//   p(l, m) = sum_k a_k(l, m) P[n-k, k, k]
//
// p(l, m) is the population of the full degenerate eigenspace (all copies of
// the multiplet summed); a_0(l, m) = d(N, l) / binom(N, n).
//
// Construction: within one excitation sector n, left multiplication by J^2
// acts tridiagonally on the elements P[n-k, k, k]; the coefficient vector of
// the eigenspace projector is the eigenvector of the transposed action with
// eigenvalue l(l+1), solved exactly by a three-term recurrence seeded by the
// trace normalization. Certified against the full-space eigenbasis.
//
// l and m are stored doubled (twol = 2l, twom = 2m) so half-integers for odd
// N stay exact.
class DickeCoeffTable {
public:
    explicit DickeCoeffTable(int N);

    int N() const { return N_; }
    int twol_max() const { return N_; }
    int twol_min() const { return N_ % 2; }
    std::vector<int> twol_values() const;  // descending: N, N-2, ..., twol_min

    long degeneracy(int twol) const;
    const std::vector<double>& coeffs(int twol, int twom) const;

    // Text export: one "N l m k a_k" row per coefficient.
    void export_text(std::ostream& os) const;

private:
    int N_ = 0;
    std::map<int, std::map<int, std::vector<double>>> table_;
};

long dicke_degeneracy(int N, int twol);

// Population p(l, m) of one eigenspace, photon indices traced out.
double dicke_population(const DickeCoeffTable& table, const SymBasis& basis, const ReducedState& s,
                        int twol, int twom);

// Total subspace population sum_m p(l, m).
double subspace_population(const DickeCoeffTable& table, const SymBasis& basis,
                           const ReducedState& s, int twol);

// Collectivity ratio R(l): full subspace population over its incoherent
// part. Below eps the incoherent weight is numerically empty and the ratio
// is flagged undefined rather than thrown, so sweep loops can proceed.
struct RValue {
    double value = 0.0;
    bool defined = false;
};

RValue collectivity_R(const DickeCoeffTable& table, const SymBasis& basis, const ReducedState& s,
                      int twol, double eps = 1e-12);

// p(l, -l): the lowest state of ladder l (dark for l < N/2).
double dark_state_population(const DickeCoeffTable& table, const SymBasis& basis,
                             const ReducedState& s, int twol);

}  // namespace dicke
