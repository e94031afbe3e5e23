#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <random>

#include "dicke/symbasis.hpp"
#include "test_helpers.hpp"

using namespace dicke;

TEST_CASE("basis size closed form") {
    CHECK(tls_basis_size(2) == 10);
    CHECK(tls_basis_size(0) == 1);
    CHECK(tls_basis_size(4) == 35);
    // formula vs brute-force enumeration of triples
    for (int N = 0; N <= 50; ++N) {
        long count = 0;
        for (int a = 0; a <= N; ++a)
            for (int b = 0; b <= N - a; ++b)
                for (int c = 0; c <= N - a - b; ++c) ++count;
        CHECK(tls_basis_size(N) == count);
    }
}

TEST_CASE("index_of and sym_of are mutually inverse over the whole range") {
    for (auto [N, M] : {std::pair{2, 1}, {3, 4}, {5, 3}}) {
        SymBasis basis(N, M);
        CHECK(basis.dim() == tls_basis_size(N) * M * M);
        for (long flat = 0; flat < basis.dim(); ++flat) {
            SymIndex s = basis.sym_of(flat);
            CHECK(basis.index_of(s) == flat);
            CHECK(s.n11 + s.n10 + s.n01 <= N);
        }
    }
    SymBasis b21(2, 1);
    CHECK(b21.dim() == 10);
    CHECK_THROWS_AS(b21.index_of({0, 0, 0, 1, 0}), std::out_of_range);
    CHECK_THROWS_AS(b21.index_of({3, 0, 0, 0, 0}), std::out_of_range);
    CHECK_THROWS_AS(b21.sym_of(10), std::out_of_range);
}

TEST_CASE("ground state: single unit entry, trace one, hermitian") {
    ReducedState s = ground_state(5, 4);
    SymBasis basis(5, 4);
    CHECK(s.coeffs[basis.index_of({0, 0, 0, 0, 0})] == cplx{1.0, 0.0});
    CHECK(s.coeffs.cwiseAbs().sum() == doctest::Approx(1.0));
    CHECK(state_trace(basis, s).real() == doctest::Approx(1.0));
    CHECK(hermiticity_residual(basis, s) == 0.0);
}

TEST_CASE("thermal state is the binomial distribution over incoherent elements") {
    const int N = 4, M = 2;
    const double f = 0.3;
    SymBasis basis(N, M);
    ReducedState s = thermal_state(N, M, f);
    CHECK(state_trace(basis, s).real() == doctest::Approx(1.0));
    for (int n = 0; n <= N; ++n) {
        double expect = binomial(N, n) * std::pow(f, n) * std::pow(1 - f, N - n);
        CHECK(s.coeffs[basis.trace_index(n, 0)].real() == doctest::Approx(expect));
    }
}

TEST_CASE("random hermitian states satisfy the involution and trace invariants") {
    std::mt19937_64 rng(7);
    SymBasis basis(4, 3);
    for (int i = 0; i < 20; ++i) {
        ReducedState s = testing::random_reduced_state(basis, rng);
        CHECK(hermiticity_residual(basis, s) < 1e-12);
        CHECK(std::abs(state_trace(basis, s) - cplx{1.0, 0.0}) < 1e-10);
    }
}

TEST_CASE("checkpoint round trip") {
    std::mt19937_64 rng(11);
    SymBasis basis(3, 2);
    ReducedState s = testing::random_reduced_state(basis, rng);
    std::string path = "state_roundtrip.bin";
    save_state(s, path);
    ReducedState r = load_state(path);
    CHECK(r.N == s.N);
    CHECK(r.M == s.M);
    CHECK((r.coeffs - s.coeffs).cwiseAbs().maxCoeff() == 0.0);
    std::remove(path.c_str());
}
