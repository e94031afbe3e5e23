#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dicke/fullspace.hpp"
#include "dicke/observables.hpp"
#include "dicke/solvers.hpp"
#include "test_helpers.hpp"

using namespace dicke;
using fullspace::Oracle;

TEST_CASE("undriven steady state is the ground state") {
    ModelParams p;
    p.N = 3;
    p.gamma = 1.0;
    p.kappa = 2.0;
    p.g = 0.7;
    p.E = 0.0;
    const int M = 3;
    Liouvillian L = Liouvillian::assemble(p, M);
    SteadyResult st = steady_state(L);
    ReducedState g = ground_state(p.N, M);
    CHECK((st.state.coeffs - g.coeffs).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(st.residual <= 1e-10);
    CHECK(st.fock_populations[0] == doctest::Approx(1.0));
}

TEST_CASE("driven steady state matches the oracle at N=3, M=4") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> ud(0.2, 2.0);
    for (int trial = 0; trial < 3; ++trial) {
        ModelParams p;
        p.N = 3;
        p.gamma = 1.0;
        p.g = ud(rng);
        p.E = ud(rng);
        p.kappa = ud(rng);
        p.delta = 0.3 * ud(rng);
        const int M = 4;
        SteadyResult st = steady_state(Liouvillian::assemble(p, M));
        Oracle oracle(p.N, M);
        ReducedState ref = oracle.extract(oracle.steady_state(p));
        CHECK((st.state.coeffs - ref.coeffs).cwiseAbs().maxCoeff() < 1e-8);
        SymBasis basis(p.N, M);
        CHECK(std::abs(state_trace(basis, st.state) - cplx{1.0, 0.0}) < 1e-10);
        CHECK(hermiticity_residual(basis, st.state) < 1e-9);
    }
}

TEST_CASE("decoupled N=1 gap is the TLS coherence rate gamma/2") {
    ModelParams p;
    p.N = 1;
    p.gamma = 1.0;
    p.kappa = 2.0;
    p.g = 0.0;
    p.E = 0.0;
    Liouvillian L = Liouvillian::assemble(p, 2);
    GapResult gap = liouvillian_gap(L);
    CHECK(gap.magnitude == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(gap.lambda1.real() <= 0.0);
    CHECK_FALSE(gap.near_zero);
}

TEST_CASE("gap eigenvalue satisfies the eigen equation for a driven system") {
    ModelParams p;
    p.N = 2;
    p.gamma = 1.0;
    p.g = 1.5;
    p.E = 0.8;
    p.kappa = 2.0;
    const int M = 3;
    Liouvillian L = Liouvillian::assemble(p, M);
    GapResult gap = liouvillian_gap(L);
    CHECK(gap.residual < 1e-7);
    CHECK(gap.magnitude > 0.0);
    CHECK(gap.lambda1.real() < 0.0);
}

TEST_CASE("propagate: zero generator leaves the state invariant") {
    ModelParams p;
    p.N = 2;
    p.gamma = 0.0;
    const int M = 2;
    Liouvillian L = Liouvillian::assemble(p, M);
    std::mt19937_64 rng(67);
    SymBasis basis(p.N, M);
    ReducedState s0 = testing::random_reduced_state(basis, rng);
    Trajectory tr = propagate(L, s0, {0.0, 1.0, 5.0});
    CHECK(tr.states.size() == 3);
    CHECK((tr.states.back().coeffs - s0.coeffs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("gamma-only decay of the doubly excited incoherent state") {
    ModelParams p;
    p.N = 2;
    p.gamma = 1.0;
    const int M = 1;
    Liouvillian L = Liouvillian::assemble(p, M);
    SymBasis basis(p.N, M);
    ReducedState init = thermal_state(p.N, M, 1.0);
    std::vector<double> grid{0.0, 0.3, 1.0, 2.0};
    Trajectory tr = propagate(L, init, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double expect = std::exp(-2.0 * grid[i]);
        CHECK(tr.states[i].coeffs[basis.index_of({2, 0, 0, 0, 0})].real() ==
              doctest::Approx(expect).epsilon(1e-7));
    }
    CHECK(tr.max_trace_drift < 1e-10);
    CHECK(tr.max_herm_residual < 1e-10);
}

TEST_CASE("propagation matches the oracle for a driven dissipative run") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> ud(0.3, 1.5);
    ModelParams p;
    p.N = 4;
    p.gamma = 1.0;
    p.g = ud(rng);
    p.E = ud(rng);
    p.kappa = ud(rng);
    p.delta = 0.2;
    const int M = 3;
    Liouvillian L = Liouvillian::assemble(p, M);
    SymBasis basis(p.N, M);
    Oracle oracle(p.N, M);
    ReducedState init = ground_state(p.N, M);
    Eigen::MatrixXcd rho = oracle.inject(init);

    std::vector<double> grid{0.0, 0.5, 2.0, 6.0, 10.0};
    Trajectory tr = propagate(L, init, grid);
    DickeCoeffTable table(p.N);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        Eigen::MatrixXcd ref = oracle.propagate(p, rho, grid[i], 1e-10, 1e-12);
        ReducedState ref_red = oracle.extract(ref);
        ObservableRecord a = evaluate_observables(basis, table, tr.states[i], p.kappa);
        ObservableRecord b = evaluate_observables(basis, table, ref_red, p.kappa);
        CHECK(std::abs(a.n_tls - b.n_tls) < 1e-7);
        CHECK(std::abs(a.m_ph - b.m_ph) < 1e-7);
        CHECK(std::abs(a.spin.jx - b.spin.jx) < 1e-7);
        CHECK(std::abs(a.A - b.A) < 1e-6);
    }
    CHECK(tr.max_trace_drift < 1e-8);
    CHECK(tr.max_herm_residual < 1e-8);
}

TEST_CASE("spin-preserving limit: J^2 subspace populations are constants of motion") {
    ModelParams p;
    p.N = 4;
    p.gamma = 0.0;
    p.delta = 0.0;
    p.g = 1.2;
    p.E = 0.9;
    p.kappa = 1.5;
    const int M = 3;
    Liouvillian L = Liouvillian::assemble(p, M);
    SymBasis basis(p.N, M);
    DickeCoeffTable table(p.N);
    // start from a state with weight in several subspaces
    std::mt19937_64 rng(73);
    Eigen::MatrixXcd rho = testing::random_symmetric_density(p.N, M, rng);
    ReducedState init = Oracle(p.N, M).extract(rho);

    std::vector<double> grid{0.0, 0.5, 1.5, 3.0};
    Trajectory tr = propagate(L, init, grid);
    for (int twol : table.twol_values()) {
        double first = subspace_population(table, basis, tr.states.front(), twol);
        for (const auto& s : tr.states)
            CHECK(subspace_population(table, basis, s, twol) ==
                  doctest::Approx(first).epsilon(1e-6));
    }
}

TEST_CASE("auto Fock cutoff: vacuum needs a single level") {
    ModelParams p;
    p.N = 2;
    p.gamma = 1.0;
    p.kappa = 2.0;
    p.g = 1.0;
    p.E = 0.0;
    CHECK(auto_fock_cutoff(p) == 1);
}

TEST_CASE("auto Fock cutoff converges and is stable under +2") {
    ModelParams p;
    p.N = 2;
    p.gamma = 1.0;
    p.kappa = 1.0;
    p.g = 2.0;
    p.E = 1.0;
    int M = auto_fock_cutoff(p);
    CHECK(M >= 2);
    auto mean_at = [&](int m) {
        SteadyResult st = steady_state(Liouvillian::assemble(p, m));
        return photon_moments(SymBasis(p.N, m), st.state).first;
    };
    double m1 = mean_at(M), m2 = mean_at(M + 2);
    CHECK(std::abs(m1 - m2) <= 2e-3 * std::max(m2, 1e-12));
}

TEST_CASE("cascade protocol on a mild system relaxes to the ground state") {
    ModelParams p;
    p.N = 3;
    p.gamma = 1.0;
    p.g = 40.0;
    p.kappa = 30.0;
    p.delta = 0.0;
    CascadeOptions opts;
    opts.t_end = 12.0;
    opts.n_out = 80;
    CascadeResult res = cascade_protocol(p, {2.0, 6.0, 18.0, 54.0}, opts);
    CHECK(res.E_star > 0.0);
    CHECK(res.fock_M >= 1);
    REQUIRE(!res.samples.empty());
    const auto& last = res.samples.back();
    // no drive: unique attractor is the ground state
    CHECK(last.obs.dark_pop.front().first == p.N);
    CHECK(last.obs.dark_pop.front().second == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(last.total_dark < 1e-3);
    // dark population rises before it decays
    double peak = 0.0;
    for (const auto& s : res.samples) peak = std::max(peak, s.total_dark);
    CHECK(peak > res.samples.front().total_dark + 1e-6);
}

TEST_CASE("cascade values agree with oracle propagation at early times") {
    ModelParams p;
    p.N = 3;
    p.gamma = 1.0;
    p.g = 40.0;
    p.kappa = 30.0;
    const int M = 4;
    CascadeOptions opts;
    opts.fock_fixed = M;
    opts.t_end = 1.0;
    opts.n_out = 40;
    CascadeResult res = cascade_protocol(p, {6.0, 18.0}, opts);

    Oracle oracle(p.N, M);
    SymBasis basis(p.N, M);
    DickeCoeffTable table(p.N);
    ModelParams p0 = p;
    p0.E = 0.0;
    Eigen::MatrixXcd rho0 = oracle.inject(res.steady.state);
    for (double t : {0.1, 1.0}) {
        ReducedState ref = oracle.extract(oracle.propagate(p0, rho0, t));
        auto it = std::find_if(res.samples.begin(), res.samples.end(),
                               [&](const CascadeSample& s) { return std::abs(s.t - t) < 1e-9; });
        bool found = it != res.samples.end();
        if (!found) continue;  // only exact grid hits are compared
        for (int twol : table.twol_values()) {
            double a = dark_state_population(table, basis, ref, twol);
            auto jt = std::find_if(it->obs.dark_pop.begin(), it->obs.dark_pop.end(),
                                   [&](auto& pr) { return pr.first == twol; });
            REQUIRE(jt != it->obs.dark_pop.end());
            CHECK(std::abs(jt->second - a) < 1e-6);
        }
    }
    // t = 0 and t = 1.0 are on the grid by construction
    CHECK(std::any_of(res.samples.begin(), res.samples.end(),
                      [&](const CascadeSample& s) { return std::abs(s.t - 1.0) < 1e-9; }));
}

TEST_CASE("stiffness below machine step size is reported, not silently eaten") {
    // invalid t_grid instead triggers an argument error
    ModelParams p;
    p.N = 1;
    p.gamma = 1.0;
    Liouvillian L = Liouvillian::assemble(p, 1);
    ReducedState s = ground_state(1, 1);
    CHECK_THROWS_AS(propagate(L, s, {1.0, 0.5}), std::invalid_argument);
}
