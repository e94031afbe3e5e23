#include "dicke/dicke_table.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace dicke {

long dicke_degeneracy(int N, int twol) {
    if (twol < 0 || twol > N || (N - twol) % 2 != 0)
        throw std::invalid_argument("dicke_degeneracy: invalid twol");
    int j = (N - twol) / 2;
    return static_cast<long>(std::llround(binomial(N, j) - binomial(N, j - 1)));
}

DickeCoeffTable::DickeCoeffTable(int N) : N_(N) {
    if (N < 1) throw std::invalid_argument("DickeCoeffTable: N must be >= 1");
    for (int n = 0; n <= N; ++n) {
        const int twom = 2 * n - N;
        const int K = std::min(n, N - n);
        for (int twol = std::abs(twom); twol <= N; twol += 2) {
            const double ll = 0.25 * twol * (twol + 2);  // l(l+1)
            const double m_half = 0.5 * twom;
            std::vector<long double> a(K + 1, 0.0L);
            a[0] = static_cast<long double>(dicke_degeneracy(N, twol)) / binomial(N, n);
            for (int k = 0; k < K; ++k) {
                // diagonal of the transposed J^2 left action on P[n-k, k, k]
                long double Ak = 0.5L * (2 * k + 1) * (N - 2 * k) + k + m_half * m_half;
                long double Bkm1 = static_cast<long double>(k) * k;  // B_{k-1} = k^2
                long double Ck1 = static_cast<long double>(n - k) * (N - n - k);
                a[k + 1] = ((ll - Ak) * a[k] - (k > 0 ? Bkm1 * a[k - 1] : 0.0L)) / Ck1;
            }
            std::vector<double> out(a.begin(), a.end());
            table_[twol][twom] = std::move(out);
        }
    }
}

std::vector<int> DickeCoeffTable::twol_values() const {
    std::vector<int> out;
    for (int twol = N_; twol >= twol_min(); twol -= 2) out.push_back(twol);
    return out;
}

long DickeCoeffTable::degeneracy(int twol) const { return dicke_degeneracy(N_, twol); }

const std::vector<double>& DickeCoeffTable::coeffs(int twol, int twom) const {
    auto it = table_.find(twol);
    if (it == table_.end()) throw std::out_of_range("DickeCoeffTable::coeffs: no such l");
    auto jt = it->second.find(twom);
    if (jt == it->second.end()) throw std::out_of_range("DickeCoeffTable::coeffs: no such m");
    return jt->second;
}

void DickeCoeffTable::export_text(std::ostream& os) const {
    os << "# N l m k a_k\n";
    for (const auto& [twol, per_m] : table_)
        for (const auto& [twom, a] : per_m)
            for (std::size_t k = 0; k < a.size(); ++k) {
                char buf[96];
                std::snprintf(buf, sizeof buf, "%d %g %g %zu %.17g\n", N_, 0.5 * twol, 0.5 * twom,
                              k, a[k]);
                os << buf;
            }
}

namespace {

// sum_p c(n-k, k, k, p, p), the photon-traced weight of P[n-k, k, k]
double traced_element(const SymBasis& basis, const ReducedState& s, int n, int k) {
    cplx acc{0.0, 0.0};
    for (int p = 0; p < basis.M(); ++p) acc += s.coeffs[basis.index_of({n - k, k, k, p, p})];
    return acc.real();
}

}  // namespace

double dicke_population(const DickeCoeffTable& table, const SymBasis& basis, const ReducedState& s,
                        int twol, int twom) {
    const int N = table.N();
    if (basis.N() != N) throw std::invalid_argument("dicke_population: basis/table N mismatch");
    const int n = (twom + N) / 2;
    const auto& a = table.coeffs(twol, twom);
    double p = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) p += a[k] * traced_element(basis, s, n, static_cast<int>(k));
    return p;
}

double subspace_population(const DickeCoeffTable& table, const SymBasis& basis,
                           const ReducedState& s, int twol) {
    double sum = 0.0;
    for (int twom = -twol; twom <= twol; twom += 2) sum += dicke_population(table, basis, s, twol, twom);
    return sum;
}

RValue collectivity_R(const DickeCoeffTable& table, const SymBasis& basis, const ReducedState& s,
                      int twol, double eps) {
    const int N = table.N();
    double num = 0.0, den = 0.0;
    for (int twom = -twol; twom <= twol; twom += 2) {
        const int n = (twom + N) / 2;
        const auto& a = table.coeffs(twol, twom);
        den += a[0] * traced_element(basis, s, n, 0);
        for (std::size_t k = 0; k < a.size(); ++k)
            num += a[k] * traced_element(basis, s, n, static_cast<int>(k));
    }
    if (!(den > eps)) return {0.0, false};
    return {num / den, true};
}

double dark_state_population(const DickeCoeffTable& table, const SymBasis& basis,
                             const ReducedState& s, int twol) {
    return dicke_population(table, basis, s, twol, -twol);
}

}  // namespace dicke
