#include "dicke/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include "dicke/ode.hpp"

namespace dicke {

namespace {

using SpMat = Eigen::SparseMatrix<cplx>;

std::vector<long> trace_indices(const SymBasis& basis) {
    std::vector<long> idx;
    idx.reserve(static_cast<std::size_t>(basis.N() + 1) * basis.M());
    for (int n = 0; n <= basis.N(); ++n)
        for (int p = 0; p < basis.M(); ++p) idx.push_back(basis.trace_index(n, p));
    return idx;
}

cplx trace_dot(const std::vector<long>& tr, const Eigen::VectorXcd& x) {
    cplx acc{0.0, 0.0};
    for (long i : tr) acc += x[i];
    return acc;
}

std::vector<double> fock_populations(const SymBasis& basis, const Eigen::VectorXcd& x) {
    std::vector<double> f(basis.M(), 0.0);
    for (int p = 0; p < basis.M(); ++p) {
        cplx acc{0.0, 0.0};
        for (int n = 0; n <= basis.N(); ++n) acc += x[basis.trace_index(n, p)];
        f[p] = acc.real();
    }
    return f;
}

}  // namespace

SteadyResult steady_state(const Liouvillian& L, double tol) {
    const SymBasis& basis = L.basis();
    const long dim = L.dim();
    const auto tr = trace_indices(basis);
    const long r0 = tr.front();  // equation replaced by the normalization

    std::vector<Eigen::Triplet<cplx>> ts;
    L.op().visit([&](long r, long c, cplx v) {
        if (r != r0) ts.emplace_back(static_cast<int>(r), static_cast<int>(c), v);
    });
    for (long i : tr) ts.emplace_back(static_cast<int>(r0), static_cast<int>(i), cplx{1.0, 0.0});
    SpMat A(dim, dim);
    A.setFromTriplets(ts.begin(), ts.end());
    A.makeCompressed();

    Eigen::SparseLU<SpMat> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success)
        throw SolverError(
            "steady_state: factorization failed; the nullspace may have dimension > 1 "
            "(degenerate steady states)");

    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(dim);
    rhs[r0] = 1.0;
    Eigen::VectorXcd x = lu.solve(rhs);

    auto residual_of = [&](const Eigen::VectorXcd& v) {
        return L.apply(v).norm() / v.norm();
    };
    double res = residual_of(x);
    for (int pass = 0; pass < 2 && res > tol; ++pass) {
        // one step of iterative refinement against the trace-replaced system
        Eigen::VectorXcd r = -L.apply(x);
        r[r0] = cplx{1.0, 0.0} - trace_dot(tr, x);
        x += lu.solve(r);
        res = residual_of(x);
    }
    if (!(res <= tol))
        throw SolverError("steady_state: residual " + std::to_string(res) +
                          " above tolerance; nullspace may be ambiguous");

    SteadyResult out{ReducedState{basis.N(), basis.M(), std::move(x)}, res, {}};
    out.fock_populations = fock_populations(basis, out.state.coeffs);
    return out;
}

namespace {

// Solves the bordered system [[L, s], [t^T, 0]] [y; a] = [x; 0]: the inverse
// of L restricted to the trace-annihilated complement of the steady state.
class DeflatedInverse {
public:
    DeflatedInverse(const Liouvillian& L, const Eigen::VectorXcd& steady,
                    const std::vector<long>& tr)
        : dim_(L.dim()), steady_(steady), tr_(tr) {
        std::vector<Eigen::Triplet<cplx>> ts;
        L.op().visit([&](long r, long c, cplx v) {
            ts.emplace_back(static_cast<int>(r), static_cast<int>(c), v);
        });
        for (long i = 0; i < dim_; ++i)
            if (steady_[i] != cplx{0.0, 0.0})
                ts.emplace_back(static_cast<int>(i), static_cast<int>(dim_), steady_[i]);
        for (long i : tr_) ts.emplace_back(static_cast<int>(dim_), static_cast<int>(i), cplx{1.0, 0.0});
        SpMat K(dim_ + 1, dim_ + 1);
        K.setFromTriplets(ts.begin(), ts.end());
        K.makeCompressed();
        lu_.compute(K);
        ok_ = lu_.info() == Eigen::Success;
    }

    bool ok() const { return ok_; }

    Eigen::VectorXcd deflate(const Eigen::VectorXcd& x) const {
        return x - steady_ * (trace_dot(tr_, x) / trace_dot(tr_, steady_));
    }

    Eigen::VectorXcd solve(const Eigen::VectorXcd& x) const {
        Eigen::VectorXcd rhs(dim_ + 1);
        rhs.head(dim_) = deflate(x);
        rhs[dim_] = 0.0;
        Eigen::VectorXcd y = lu_.solve(rhs);
        return deflate(y.head(dim_));
    }

private:
    long dim_;
    Eigen::VectorXcd steady_;
    std::vector<long> tr_;
    Eigen::SparseLU<SpMat> lu_;
    bool ok_ = false;
};

}  // namespace

GapResult liouvillian_gap(const Liouvillian& L, const SteadyResult* steady, const GapOptions& opts) {
    const long dim = L.dim();
    const auto tr = trace_indices(L.basis());

    SteadyResult local;
    if (!steady) {
        local = steady_state(L, 1e-9);
        steady = &local;
    }
    DeflatedInverse inv(L, steady->state.coeffs, tr);
    if (!inv.ok())
        throw SolverError("liouvillian_gap: bordered factorization failed (0 may be degenerate)");

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> nd;
    Eigen::VectorXcd v0(dim);
    for (long i = 0; i < dim; ++i) v0[i] = cplx{nd(rng), nd(rng)};
    v0 = inv.deflate(v0);
    v0.normalize();

    const int m = static_cast<int>(std::min<long>(opts.krylov_dim, dim - 1));
    cplx best_theta{0.0, 0.0};
    double best_res = 1e300;

    for (int restart = 0; restart < opts.max_restarts; ++restart) {
        std::vector<Eigen::VectorXcd> V;
        V.reserve(m + 1);
        V.push_back(v0);
        Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(m + 1, m);
        int built = m;
        for (int j = 0; j < m; ++j) {
            Eigen::VectorXcd w = inv.solve(V[j]);
            for (int pass = 0; pass < 2; ++pass)  // MGS with reorthogonalization
                for (int i = 0; i <= j; ++i) {
                    cplx h = V[i].adjoint() * w;
                    H(i, j) += h;
                    w -= h * V[i];
                }
            double nw = w.norm();
            H(j + 1, j) = nw;
            if (nw < 1e-12) {
                built = j + 1;
                break;
            }
            V.push_back(w / nw);
        }

        Eigen::MatrixXcd Hm = H.topLeftCorner(built, built);
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Hm);
        if (es.info() != Eigen::Success) throw SolverError("liouvillian_gap: Hessenberg eig failed");

        int pick = -1;
        double pick_mag = -1.0;
        for (int i = 0; i < built; ++i) {
            double mag = std::abs(es.eigenvalues()[i]);
            if (mag > pick_mag) {
                pick_mag = mag;
                pick = i;
            }
        }
        cplx theta = es.eigenvalues()[pick];
        Eigen::VectorXcd y = es.eigenvectors().col(pick);
        double ritz_res = (built < m ? 0.0 : std::abs(H(m, m - 1) * y[built - 1]) / pick_mag);

        Eigen::VectorXcd x = Eigen::VectorXcd::Zero(dim);
        for (int i = 0; i < built; ++i) x += y[i] * V[i];
        x.normalize();

        if (ritz_res < best_res) {
            best_res = ritz_res;
            best_theta = theta;
        }
        if (ritz_res <= opts.tol || built < m) {
            best_theta = theta;
            best_res = ritz_res;
            v0 = x;
            break;
        }
        v0 = inv.deflate(x);
        v0.normalize();
    }

    if (std::abs(best_theta) == 0.0 || best_res > 1e-6)
        throw SolverError("liouvillian_gap: Arnoldi did not converge");
    GapResult out;
    out.lambda1 = 1.0 / best_theta;
    out.magnitude = std::abs(out.lambda1);
    out.near_zero = out.magnitude < opts.near_zero_tol;
    Eigen::VectorXcd resid = L.apply(v0) - out.lambda1 * v0;
    out.residual = resid.norm() / v0.norm();
    if (out.lambda1.real() > 1e-6 * std::max(1.0, out.magnitude))
        throw SolverError("liouvillian_gap: converged eigenvalue has positive real part");
    return out;
}

Trajectory propagate(const Liouvillian& L, const ReducedState& initial,
                     const std::vector<double>& t_grid, const IntegratorOptions& opts,
                     const std::function<void(double, const ReducedState&)>& observer,
                     bool keep_states) {
    const SymBasis& basis = L.basis();
    if (initial.N != basis.N() || initial.M != basis.M())
        throw std::invalid_argument("propagate: state/basis mismatch");
    const auto tr = trace_indices(basis);

    Trajectory traj;
    Eigen::VectorXcd y = initial.coeffs;
    auto rhs = [&L](double, const Eigen::VectorXcd& v) { return L.apply(v); };

    ode::Options oo;
    oo.rtol = opts.rtol;
    oo.atol = opts.atol;
    oo.max_steps = opts.max_steps;

    auto on_output = [&](double t, const Eigen::VectorXcd& v) {
        ReducedState s{basis.N(), basis.M(), v};
        traj.times.push_back(t);
        traj.max_trace_drift =
            std::max(traj.max_trace_drift, std::abs(trace_dot(tr, v) - cplx{1.0, 0.0}));
        traj.max_herm_residual = std::max(traj.max_herm_residual, hermiticity_residual(basis, s));
        if (observer) observer(t, s);
        if (keep_states) traj.states.push_back(std::move(s));
    };

    try {
        ode::Stats st = ode::integrate(rhs, y, 0.0, t_grid, oo, on_output);
        traj.n_steps = st.n_steps;
        traj.n_rejected = st.n_rejected;
    } catch (const ode::StepSizeUnderflow& e) {
        throw SolverError("propagate: stiffness, step underflow at t = " + std::to_string(e.t_fail));
    }
    return traj;
}

int auto_fock_cutoff(const ModelParams& params, const FockCriteria& crit) {
    params.validate();
    double prev_mean = -1.0;
    for (int M = crit.m_start; M <= crit.m_max; M += 2) {
        ModelParams p = params;
        p.fock_cutoff = M;
        SteadyResult st = steady_state(Liouvillian::assemble(p, M), crit.steady_tol);
        const auto& f = st.fock_populations;
        double tail = f[M - 1] + (M >= 2 ? f[M - 2] : 0.0);
        auto [mean, m2] = photon_moments(SymBasis(params.N, M), st.state);
        (void)m2;
        bool mean_ok = prev_mean >= 0.0 &&
                       std::abs(mean - prev_mean) <= crit.mean_rel_tol * std::max(mean, 1e-12);
        if (tail < crit.tail_tol && mean_ok) {
            // trim to the smallest cutoff that still contains the occupied
            // levels; a pure vacuum needs a single level
            int top = 0;
            for (int p2 = 0; p2 < M; ++p2)
                if (f[p2] > crit.level_tol) top = p2;
            if (top == 0) return 1;
            return std::min(M, top + 2);
        }
        prev_mean = mean;
    }
    throw SolverError("auto_fock_cutoff: no convergence below M = " + std::to_string(crit.m_max));
}

CascadeResult cascade_protocol(const ModelParams& params, const std::vector<double>& E_grid,
                               const CascadeOptions& opts) {
    params.validate();
    if (E_grid.empty()) throw std::invalid_argument("cascade_protocol: empty drive grid");

    CascadeResult out;
    const int N = params.N;
    DickeCoeffTable table(N);
    const int twol_min = table.twol_min();

    int M = opts.fock_fixed;
    if (M <= 0) {
        ModelParams probe = params;
        probe.E = *std::max_element(E_grid.begin(), E_grid.end());
        // headroom for the transient photon burst right after the quench
        M = std::min(opts.fock.m_max, auto_fock_cutoff(probe, opts.fock) + 4);
    }
    out.fock_M = M;
    SymBasis basis(N, M);

    ModelParams p0 = params;
    p0.E = 0.0;
    Liouvillian L0 = Liouvillian::assemble(p0, M);

    bool found = false;
    double bestR = 0.0, bestE = 0.0;
    SteadyResult bestSteady;
    for (double E : E_grid) {
        SteadyResult st = steady_state(L0.with_drive(E), opts.steady_tol);
        RValue R = collectivity_R(table, basis, st.state, twol_min);
        if (R.defined && (!found || R.value > bestR)) {
            found = true;
            bestR = R.value;
            bestE = E;
            bestSteady = std::move(st);
        }
    }
    if (!found)
        throw SolverError(
            "cascade_protocol: R(l_min) undefined at every drive grid point; the subradiant "
            "subspace carries no incoherent weight anywhere on the grid");
    out.E_star = bestE;
    out.R_lmin_at_star = bestR;
    out.steady = std::move(bestSteady);

    // log-spaced output resolving both 1/g and 1/gamma
    double t_first = opts.t_first;
    if (t_first <= 0.0) t_first = params.g > 0 ? 0.01 / params.g : 1e-6 * opts.t_end;
    std::vector<double> t_grid{0.0};
    const int n_log = std::max(2, opts.n_out - 1);
    for (int i = 0; i < n_log; ++i)
        t_grid.push_back(t_first * std::pow(opts.t_end / t_first, double(i) / (n_log - 1)));

    auto sample = [&](double t, const ReducedState& s) {
        CascadeSample cs;
        cs.t = t;
        cs.obs = evaluate_observables(basis, table, s, params.kappa);
        for (const auto& [twol, pd] : cs.obs.dark_pop)
            if (twol < N) cs.total_dark += pd;
        out.samples.push_back(std::move(cs));
    };
    out.trajectory =
        propagate(L0, out.steady.state, t_grid, opts.integ, sample, opts.keep_states);
    return out;
}

}  // namespace dicke
