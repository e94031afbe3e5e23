#pragma once

#include <array>
#include <map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "dicke/model.hpp"
#include "dicke/symbasis.hpp"

namespace dicke::fullspace {

struct OracleOptions {
    long max_hilbert_dim = 1024;  // 2^N * M ceiling
};

// Brute-force reference in the full 2^N (x) Fock space, plus the maps
// between the full space and the symmetric basis. Everything here trades
// performance for directness; it exists to certify the reduced machinery.
//
// Full-space index layout: (tls_bits * M + photon), TLS bit i = 1 when TLS i
// is excited, matching the photon-fastest layout of the reduced basis.
class Oracle {
public:
    Oracle(int N, int M, OracleOptions opts = {});

    int N() const { return N_; }
    int M() const { return M_; }
    long dim() const { return dim_; }       // 2^N * M
    long tls_dim() const { return tdim_; }  // 2^N

    // TLS-only unnormalized symmetric element (2^N x 2^N), cached.
    const Eigen::SparseMatrix<cplx>& sym_element(int n11, int n10, int n01) const;

    // sigma_ab at one site, or the collective sum, extended by the photon
    // identity; a, b in {0, 1} with sigma_ab = |a><b|.
    Eigen::SparseMatrix<cplx> site_op(int site, int a, int b) const;
    Eigen::SparseMatrix<cplx> collective_op(int a, int b) const;
    Eigen::SparseMatrix<cplx> annihilation() const;  // I_tls (x) b
    Eigen::SparseMatrix<cplx> hamiltonian(const ModelParams& p) const;

    ReducedState extract(const Eigen::MatrixXcd& rho) const;
    // Throws std::invalid_argument when the coefficients are not hermitian.
    Eigen::MatrixXcd inject(const ReducedState& s, double herm_tol = 1e-9) const;

    Eigen::MatrixXcd apply_liouvillian(const ModelParams& p, const Eigen::MatrixXcd& rho) const;
    Eigen::SparseMatrix<cplx> superoperator(const ModelParams& p) const;
    Eigen::MatrixXcd steady_state(const ModelParams& p) const;
    Eigen::MatrixXcd propagate(const ModelParams& p, const Eigen::MatrixXcd& rho0, double t_end,
                               double rtol = 1e-9, double atol = 1e-11) const;

private:
    int N_ = 0, M_ = 0;
    long tdim_ = 0, dim_ = 0;
    mutable std::map<std::array<int, 3>, Eigen::SparseMatrix<cplx>> sym_cache_;
};

// Lindblad generator with operators cached for repeated application.
class FullGenerator {
public:
    FullGenerator(const Oracle& oracle, const ModelParams& p);
    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;

private:
    double gamma_, delta_, kappa_;
    Eigen::SparseMatrix<cplx> H_;
    std::vector<Eigen::SparseMatrix<cplx>> lower_, raise_, proj_e_, sz_;
    Eigen::SparseMatrix<cplx> b_, bdag_, nph_;
};

// Simultaneous (J^2, J_z) eigenstructure of the N-TLS space. Quantum numbers
// are stored doubled (twol = 2l, twom = 2m) so half-integers stay exact.
struct DickeEigenbasis {
    int N = 0;
    // twol -> (twom -> orthonormal eigenvector columns, one per degenerate copy)
    std::map<int, std::map<int, Eigen::MatrixXcd>> blocks;

    std::vector<int> twol_values() const;
    long degeneracy(int twol) const;
    Eigen::MatrixXcd projector(int twol, int twom) const;  // sums degenerate copies
};

DickeEigenbasis dicke_eigenbasis(int N);

// Expansion coefficients a_k of the (l, m) eigenspace projector over the
// symmetric elements P[n-k, k, k], solved in the full space. Certification
// source for the reduced-coefficient table.
std::vector<double> oracle_dicke_coeffs(const Oracle& oracle, const DickeEigenbasis& eb, int twol,
                                        int twom);

}  // namespace dicke::fullspace
