#pragma once

#include <random>

#include <Eigen/Dense>

#include "dicke/symbasis.hpp"

namespace dicke::testing {

// Random hermitian, trace-one coefficient vector (not necessarily a
// positive state; linear checks only need hermiticity and trace).
inline ReducedState random_reduced_state(const SymBasis& basis, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Eigen::VectorXcd c(basis.dim());
    for (long i = 0; i < basis.dim(); ++i) c[i] = cplx{nd(rng), nd(rng)};
    c = 0.5 * (c + herm_involution(basis, c));
    cplx tr{0.0, 0.0};
    for (int n = 0; n <= basis.N(); ++n)
        for (int p = 0; p < basis.M(); ++p) tr += c[basis.trace_index(n, p)];
    // shift diagonal weight so the trace is exactly one
    cplx shift = (cplx{1.0, 0.0} - tr) / static_cast<double>((basis.N() + 1) * basis.M());
    for (int n = 0; n <= basis.N(); ++n)
        for (int p = 0; p < basis.M(); ++p) c[basis.trace_index(n, p)] += shift;
    return {basis.N(), basis.M(), std::move(c)};
}

// Random full-space density matrix (hermitian, positive, trace one).
inline Eigen::MatrixXcd random_density_matrix(long dim, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Eigen::MatrixXcd G(dim, dim);
    for (long r = 0; r < dim; ++r)
        for (long c = 0; c < dim; ++c) G(r, c) = cplx{nd(rng), nd(rng)};
    Eigen::MatrixXcd rho = G * G.adjoint();
    rho /= rho.trace();
    return rho;
}

// Permutation-symmetric positive full-space state: a random density matrix
// averaged over all site permutations (N small).
inline Eigen::MatrixXcd random_symmetric_density(int N, int M, std::mt19937_64& rng) {
    const long tdim = 1L << N, dim = tdim * M;
    Eigen::MatrixXcd rho = random_density_matrix(dim, rng);
    std::vector<int> perm(N);
    for (int i = 0; i < N; ++i) perm[i] = i;
    Eigen::MatrixXcd avg = Eigen::MatrixXcd::Zero(dim, dim);
    long count = 0;
    do {
        // permutation acting on TLS bit patterns, identity on photons
        Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(dim, dim);
        for (long bits = 0; bits < tdim; ++bits) {
            long target = 0;
            for (int i = 0; i < N; ++i)
                if ((bits >> i) & 1) target |= 1L << perm[i];
            for (int p = 0; p < M; ++p) P(target * M + p, bits * M + p) = 1.0;
        }
        avg += P * rho * P.adjoint();
        ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return avg / static_cast<double>(count);
}

}  // namespace dicke::testing
