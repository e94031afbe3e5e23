#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dicke/dicke_table.hpp"
#include "dicke/liouvillian.hpp"
#include "dicke/model.hpp"
#include "dicke/observables.hpp"
#include "dicke/symbasis.hpp"

namespace dicke {

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SteadyResult {
    ReducedState state;
    double residual = 0.0;                 // ||L x|| / ||x||
    std::vector<double> fock_populations;  // photon level occupations
};

// Null vector of L with unit trace, via a trace-replaced sparse LU solve
// plus one refinement pass. Throws SolverError on factorization failure
// (which includes a steady-state manifold of dimension > 1) or when the
// residual cannot be brought below tol.
SteadyResult steady_state(const Liouvillian& L, double tol = 1e-10);

struct GapResult {
    cplx lambda1{0.0, 0.0};
    double magnitude = 0.0;   // |lambda1| in internal units (gamma = 1)
    bool near_zero = false;   // gap indistinguishable from 0: degenerate steady states
    double residual = 0.0;    // ||L v - lambda v|| / ||v||
};

struct GapOptions {
    int krylov_dim = 36;
    int max_restarts = 10;
    double tol = 1e-9;            // Ritz residual tolerance (relative)
    double near_zero_tol = 1e-9;  // |lambda1| below this is flagged
    unsigned long seed = 20240601;
};

// Smallest-magnitude nonzero eigenvalue of L: shift-and-invert Arnoldi at
// zero with the exact steady-state/trace null pair deflated through a
// bordered factorization.
GapResult liouvillian_gap(const Liouvillian& L, const SteadyResult* steady = nullptr,
                          const GapOptions& opts = {});

struct IntegratorOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    long max_steps = 200'000'000;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<ReducedState> states;  // filled when keep_states
    // conservation diagnostics, logged (never corrected)
    double max_trace_drift = 0.0;
    double max_herm_residual = 0.0;
    long n_steps = 0;
    long n_rejected = 0;
};

// Adaptive propagation of d/dt c = L c through t_grid (increasing, >= 0).
// The observer sees every grid time. Stiffness (step-size underflow) is
// reported as SolverError carrying the failure time.
Trajectory propagate(const Liouvillian& L, const ReducedState& initial,
                     const std::vector<double>& t_grid, const IntegratorOptions& opts = {},
                     const std::function<void(double, const ReducedState&)>& observer = {},
                     bool keep_states = true);

struct FockCriteria {
    double tail_tol = 1e-8;     // top-two Fock level population bound
    double mean_rel_tol = 1e-3; // <b+b> change between consecutive M
    double level_tol = 1e-10;   // occupation below this counts as empty when trimming
    int m_start = 3;
    int m_max = 64;
    double steady_tol = 1e-10;
};

// Grow M in steps of two until the steady state has a converged photon
// tail, then trim to the smallest sufficient cutoff (vacuum returns 1).
int auto_fock_cutoff(const ModelParams& params, const FockCriteria& crit = {});

struct CascadeOptions {
    double t_end = 10.0;     // in units of 1/gamma
    int n_out = 240;         // log-spaced output points
    double t_first = 0.0;    // first output time; 0 selects ~0.01/g
    IntegratorOptions integ;
    FockCriteria fock;
    int fock_fixed = 0;      // > 0 bypasses auto selection
    double steady_tol = 1e-10;
    bool keep_states = false;
};

struct CascadeSample {
    double t = 0.0;
    ObservableRecord obs;
    double total_dark = 0.0;  // sum of p(l, -l) over l < N/2
};

struct CascadeResult {
    double E_star = 0.0;
    double R_lmin_at_star = 0.0;
    int fock_M = 0;
    SteadyResult steady;                // steady state at E_star before the quench
    std::vector<CascadeSample> samples; // post-quench trajectory
    Trajectory trajectory;              // diagnostics (and states when kept)
};

// Drive-quench protocol: locate the grid drive maximizing R(l_min), relax
// from that steady state with E = 0, and record the dark-state series on a
// log grid resolving both the 1/g and 1/gamma scales.
CascadeResult cascade_protocol(const ModelParams& params, const std::vector<double>& E_grid,
                               const CascadeOptions& opts = {});

}  // namespace dicke
