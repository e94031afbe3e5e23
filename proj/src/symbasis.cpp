#include "dicke/symbasis.hpp"

#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace dicke {

long tls_basis_size(int N) {
    if (N < 0) throw std::invalid_argument("tls_basis_size: N must be >= 0");
    long n = N;
    return (n + 1) * (n + 2) * (n + 3) / 6;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double sym_multiplicity(int N, int n11, int n10, int n01) {
    int n00 = N - n11 - n10 - n01;
    if (n11 < 0 || n10 < 0 || n01 < 0 || n00 < 0)
        throw std::invalid_argument("sym_multiplicity: invalid triple");
    // N! / (n11! n10! n01! n00!) as a product of binomials
    return binomial(N, n11) * binomial(N - n11, n10) * binomial(N - n11 - n10, n01);
}

SymBasis::SymBasis(int N, int M) : N_(N), M_(M) {
    if (N < 0) throw std::invalid_argument("SymBasis: N must be >= 0");
    if (M < 1) throw std::invalid_argument("SymBasis: M must be >= 1");
    const int w = N + 1;
    rank_.assign(w * w * w, -1);
    for (int n11 = 0; n11 <= N; ++n11)
        for (int n10 = 0; n10 <= N - n11; ++n10)
            for (int n01 = 0; n01 <= N - n11 - n10; ++n01) {
                rank_[(n11 * w + n10) * w + n01] = static_cast<int>(triples_.size());
                triples_.push_back({n11, n10, n01});
            }
    if (static_cast<long>(triples_.size()) != tls_basis_size(N))
        throw std::logic_error("SymBasis: enumeration does not match closed form");
}

int SymBasis::tls_rank(int n11, int n10, int n01) const {
    if (!valid_triple(n11, n10, n01)) throw std::out_of_range("SymBasis::tls_rank: invalid triple");
    const int w = N_ + 1;
    return rank_[(n11 * w + n10) * w + n01];
}

long SymBasis::index_of(const SymIndex& s) const {
    if (s.ph_ket < 0 || s.ph_ket >= M_ || s.ph_bra < 0 || s.ph_bra >= M_)
        throw std::out_of_range("SymBasis::index_of: photon index out of range");
    return static_cast<long>(tls_rank(s.n11, s.n10, s.n01)) * M_ * M_ + static_cast<long>(s.ph_ket) * M_ +
           s.ph_bra;
}

SymIndex SymBasis::sym_of(long flat) const {
    if (flat < 0 || flat >= dim()) throw std::out_of_range("SymBasis::sym_of: flat index out of range");
    const long mm = static_cast<long>(M_) * M_;
    const auto& t = triples_[flat / mm];
    long ph = flat % mm;
    return SymIndex{t[0], t[1], t[2], static_cast<int>(ph / M_), static_cast<int>(ph % M_)};
}

long SymBasis::trace_index(int n11, int p) const { return index_of({n11, 0, 0, p, p}); }

ReducedState ground_state(int N, int M) {
    SymBasis basis(N, M);
    ReducedState s{N, M, Eigen::VectorXcd::Zero(basis.dim())};
    s.coeffs[basis.trace_index(0, 0)] = 1.0;
    return s;
}

ReducedState product_state(int N, int M, double rho_ee, cplx rho_eg) {
    if (rho_ee < 0.0 || rho_ee > 1.0)
        throw std::invalid_argument("product_state: rho_ee must lie in [0, 1]");
    SymBasis basis(N, M);
    ReducedState s{N, M, Eigen::VectorXcd::Zero(basis.dim())};
    const cplx f_e = rho_ee, f_g = 1.0 - rho_ee;
    const cplx f_u = std::conj(rho_eg);  // tr[sigma_10 rho] = <g|rho|e>
    const cplx f_d = rho_eg;
    for (int r = 0; r < basis.tls_count(); ++r) {
        const auto& t = basis.tls_triple(r);
        int n00 = N - t[0] - t[1] - t[2];
        cplx v = sym_multiplicity(N, t[0], t[1], t[2]);
        for (int i = 0; i < t[0]; ++i) v *= f_e;
        for (int i = 0; i < t[1]; ++i) v *= f_u;
        for (int i = 0; i < t[2]; ++i) v *= f_d;
        for (int i = 0; i < n00; ++i) v *= f_g;
        s.coeffs[basis.index_of({t[0], t[1], t[2], 0, 0})] = v;
    }
    return s;
}

ReducedState thermal_state(int N, int M, double excited_fraction) {
    return product_state(N, M, excited_fraction, cplx{0.0, 0.0});
}

cplx state_trace(const SymBasis& basis, const ReducedState& s) {
    cplx tr{0.0, 0.0};
    for (int n = 0; n <= basis.N(); ++n)
        for (int p = 0; p < basis.M(); ++p) tr += s.coeffs[basis.trace_index(n, p)];
    return tr;
}

Eigen::VectorXcd herm_involution(const SymBasis& basis, const Eigen::VectorXcd& c) {
    Eigen::VectorXcd out(c.size());
    const int M = basis.M();
    for (long flat = 0; flat < basis.dim(); ++flat) {
        SymIndex s = basis.sym_of(flat);
        long partner = basis.index_of({s.n11, s.n01, s.n10, s.ph_bra, s.ph_ket});
        out[flat] = std::conj(c[partner]);
    }
    (void)M;
    return out;
}

double hermiticity_residual(const SymBasis& basis, const ReducedState& s) {
    return (s.coeffs - herm_involution(basis, s.coeffs)).cwiseAbs().maxCoeff();
}

namespace {
constexpr std::uint64_t kStateMagic = 0xd1c4e57a00000001ULL;  // format version 1
}

void save_state(const ReducedState& s, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("save_state: cannot open " + path);
    std::uint64_t magic = kStateMagic;
    std::int64_t n = s.N, m = s.M, len = s.coeffs.size();
    f.write(reinterpret_cast<const char*>(&magic), sizeof magic);
    f.write(reinterpret_cast<const char*>(&n), sizeof n);
    f.write(reinterpret_cast<const char*>(&m), sizeof m);
    f.write(reinterpret_cast<const char*>(&len), sizeof len);
    f.write(reinterpret_cast<const char*>(s.coeffs.data()), len * sizeof(cplx));
    if (!f) throw std::runtime_error("save_state: write failed for " + path);
}

ReducedState load_state(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("load_state: cannot open " + path);
    std::uint64_t magic = 0;
    std::int64_t n = 0, m = 0, len = 0;
    f.read(reinterpret_cast<char*>(&magic), sizeof magic);
    if (magic != kStateMagic) throw std::runtime_error("load_state: bad header in " + path);
    f.read(reinterpret_cast<char*>(&n), sizeof n);
    f.read(reinterpret_cast<char*>(&m), sizeof m);
    f.read(reinterpret_cast<char*>(&len), sizeof len);
    ReducedState s{static_cast<int>(n), static_cast<int>(m), Eigen::VectorXcd(len)};
    if (len != SymBasis(s.N, s.M).dim()) throw std::runtime_error("load_state: inconsistent dimensions");
    f.read(reinterpret_cast<char*>(s.coeffs.data()), len * sizeof(cplx));
    if (!f) throw std::runtime_error("load_state: truncated file " + path);
    return s;
}

}  // namespace dicke
