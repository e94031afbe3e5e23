#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dicke/sparse.hpp"

namespace dicke {

// Number of symmetric TLS Liouville elements, (N+1)(N+2)(N+3)/6.
long tls_basis_size(int N);

// Multinomial N! / (n11! n10! n01! n00!): the number of distinct operator
// words collected in the (unnormalized) symmetric element.
double sym_multiplicity(int N, int n11, int n10, int n01);

double binomial(int n, int k);

// One coefficient address: the TLS triple [n11, n10, n01] plus photon
// ket/bra Fock indices.
struct SymIndex {
    int n11 = 0;
    int n10 = 0;
    int n01 = 0;
    int ph_ket = 0;
    int ph_bra = 0;
    bool operator==(const SymIndex&) const = default;
};

// Enumeration of the reduced basis for N two-level systems and M photon
// levels. Flat layout: TLS triples in lexicographic (n11, n10, n01) order,
// photon indices fastest with flat = rank * M^2 + ph_ket * M + ph_bra.
// Immutable after construction.
class SymBasis {
public:
    SymBasis(int N, int M);

    int N() const { return N_; }
    int M() const { return M_; }
    int tls_count() const { return static_cast<int>(triples_.size()); }
    long dim() const { return static_cast<long>(tls_count()) * M_ * M_; }

    bool valid_triple(int n11, int n10, int n01) const {
        return n11 >= 0 && n10 >= 0 && n01 >= 0 && n11 + n10 + n01 <= N_;
    }
    int tls_rank(int n11, int n10, int n01) const;
    const std::array<int, 3>& tls_triple(int rank) const { return triples_[rank]; }

    long index_of(const SymIndex& s) const;
    SymIndex sym_of(long flat) const;

    // Flat index of the trace element (n11, 0, 0, p, p).
    long trace_index(int n11, int p) const;

private:
    int N_ = 0;
    int M_ = 0;
    std::vector<std::array<int, 3>> triples_;
    std::vector<int> rank_;  // dense lookup over (n11, n10, n01)
};

// Coefficient vector over a SymBasis; the reduced density operator.
struct ReducedState {
    int N = 0;
    int M = 0;
    Eigen::VectorXcd coeffs;
};

// All TLS in the ground state, photon vacuum: single unit entry.
ReducedState ground_state(int N, int M);

// Site-factorized state rho_1^(xN) (x) |0><0|_ph for a single-TLS density
// matrix with excited population rho_ee and coherence rho_eg = <e|rho|g>.
ReducedState product_state(int N, int M, double rho_ee, cplx rho_eg);

// Independent-TLS thermal occupation: binomial distribution over the
// incoherent elements, photon vacuum.
ReducedState thermal_state(int N, int M, double excited_fraction);

cplx state_trace(const SymBasis& basis, const ReducedState& s);

// Max deviation from c(n11,n10,n01,p,q) = conj(c(n11,n01,n10,q,p)).
double hermiticity_residual(const SymBasis& basis, const ReducedState& s);

// The hermiticity involution: swap (n10 <-> n01, ph_ket <-> ph_bra) and
// conjugate. States representing hermitian operators are fixed points.
Eigen::VectorXcd herm_involution(const SymBasis& basis, const Eigen::VectorXcd& c);

// Checkpoint serialization (binary, versioned header).
void save_state(const ReducedState& s, const std::string& path);
ReducedState load_state(const std::string& path);

}  // namespace dicke
