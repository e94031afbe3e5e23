#include "dicke/observables.hpp"

#include <stdexcept>

namespace dicke {

namespace {

// photon-traced weight of the element (n11, n10, n01)
cplx traced(const SymBasis& basis, const ReducedState& s, int n11, int n10, int n01) {
    if (!basis.valid_triple(n11, n10, n01)) return {0.0, 0.0};
    cplx acc{0.0, 0.0};
    for (int p = 0; p < basis.M(); ++p) acc += s.coeffs[basis.index_of({n11, n10, n01, p, p})];
    return acc;
}

}  // namespace

double tls_excitation(const SymBasis& basis, const ReducedState& s) {
    // J_11 = sum_n n P[n,0,0]
    double acc = 0.0;
    for (int n = 1; n <= basis.N(); ++n) acc += n * traced(basis, s, n, 0, 0).real();
    return acc;
}

std::pair<double, double> photon_moments(const SymBasis& basis, const ReducedState& s) {
    double m1 = 0.0, m2 = 0.0;
    for (int p = 1; p < basis.M(); ++p) {
        double f = 0.0;
        for (int n = 0; n <= basis.N(); ++n) f += s.coeffs[basis.trace_index(n, p)].real();
        m1 += p * f;
        m2 += static_cast<double>(p) * (p - 1) * f;
    }
    return {m1, m2};
}

G2 g2_zero(const SymBasis& basis, const ReducedState& s, double eps) {
    auto [m1, m2] = photon_moments(basis, s);
    if (!(m1 > eps)) return {0.0, false};
    return {m2 / (m1 * m1), true};
}

SpinMoments collective_second_moments(const SymBasis& basis, const ReducedState& s) {
    const int N = basis.N();
    cplx jp{0, 0}, jp2{0, 0};
    double pop_w = 0.0, pop_w_rev = 0.0, ud = 0.0, jz = 0.0, jz2 = 0.0;
    for (int n = 0; n <= N; ++n) {
        double pd = traced(basis, s, n, 0, 0).real();
        jp += traced(basis, s, n, 1, 0);       // J+ = sum_n P[n,1,0]
        jp2 += traced(basis, s, n, 2, 0);      // J+^2 = 2 sum_n P[n,2,0]
        ud += traced(basis, s, n, 1, 1).real();
        pop_w += n * pd;
        pop_w_rev += (N - n) * pd;
        jz += (n - 0.5 * N) * pd;
        jz2 += (n - 0.5 * N) * (n - 0.5 * N) * pd;
    }
    jp2 *= 2.0;
    const double jpjm = ud + pop_w;      // <J+ J->
    const double jmjp = ud + pop_w_rev;  // <J- J+>
    SpinMoments m;
    m.jx = jp.real();
    m.jy = jp.imag();
    m.jz = jz;
    m.jx2 = 0.25 * (2.0 * jp2.real() + jpjm + jmjp);
    m.jy2 = 0.25 * (-2.0 * jp2.real() + jpjm + jmjp);
    m.jz2 = jz2;
    return m;
}

std::array<double, 4> ssi_all(const SpinMoments& m, int N) {
    const double n = N;
    return {
        m.jy2 + m.jz2 - 0.5 * n - (n - 1.0) * m.var_jx(),
        m.jx2 + m.jz2 - 0.5 * n - (n - 1.0) * m.var_jy(),
        m.jx2 + 0.25 * n * (n - 2.0) - (n - 1.0) * (m.var_jy() + m.var_jz()),
        m.jy2 + 0.25 * n * (n - 2.0) - (n - 1.0) * (m.var_jx() + m.var_jz()),
    };
}

double ssi_A(const SpinMoments& m, int N) { return ssi_all(m, N)[0]; }

std::array<double, 2> ssi_summed(const SpinMoments& m, int N) {
    auto v = ssi_all(m, N);
    return {v[0] + v[1], v[2] + v[3]};
}

ObservableRecord evaluate_observables(const SymBasis& basis, const DickeCoeffTable& table,
                                      const ReducedState& s, double kappa) {
    if (basis.N() != table.N())
        throw std::invalid_argument("evaluate_observables: basis/table N mismatch");
    ObservableRecord r;
    r.n_tls = tls_excitation(basis, s);
    r.n_tls_norm = r.n_tls / basis.N();
    auto [m1, m2] = photon_moments(basis, s);
    r.m_ph = m1;
    (void)m2;
    r.output_rate = kappa * m1;
    r.g2 = g2_zero(basis, s);
    r.spin = collective_second_moments(basis, s);
    r.ssi = ssi_all(r.spin, basis.N());
    r.A = r.ssi[0];
    for (int twol : table.twol_values()) {
        r.subspace_pop.emplace_back(twol, subspace_population(table, basis, s, twol));
        r.R_by_l.emplace_back(twol, collectivity_R(table, basis, s, twol));
        r.dark_pop.emplace_back(twol, dark_state_population(table, basis, s, twol));
    }
    return r;
}

}  // namespace dicke
