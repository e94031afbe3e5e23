#include "dicke/liouvillian.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace dicke {

namespace {

constexpr cplx I{0.0, 1.0};

// Emits generator rows. The equations of motion follow from the adjoint
// action of each master-equation term on the unnormalized symmetric elements
// combined with photon dyads; the combinatorial weights below count how many
// operator words of the target element arise when one site letter is
// replaced. All weights are certified against the full-space oracle.
class RowBuilder {
public:
    RowBuilder(const SymBasis& basis, std::vector<Triplet>& out) : basis_(basis), out_(out) {}

    void build_hamiltonian(double delta0, double delta1, double g) {
        const int N = basis_.N(), M = basis_.M();
        for (int rank = 0; rank < basis_.tls_count(); ++rank) {
            const auto [n, k, l] = basis_.tls_triple(rank);
            const int ng = N - n - k - l;  // ground-letter count
            for (int p = 0; p < M; ++p)
                for (int q = 0; q < M; ++q) {
                    const long row = flat(n, k, l, p, q);
                    if (delta0 != 0.0 || delta1 != 0.0)
                        add(row, n, k, l, p, q, I * (delta0 * (q - p) + delta1 * (k - l)));
                    if (g == 0.0) continue;
                    const double sq = std::sqrt(static_cast<double>(q));
                    const double sp = std::sqrt(static_cast<double>(p));
                    const double sq1 = std::sqrt(q + 1.0);
                    const double sp1 = std::sqrt(p + 1.0);
                    // J_10 b and J_01 b^dag, left and right multiplication
                    if (q >= 1) {
                        add(row, n + 1, k, l - 1, p, q - 1, I * g * sq * (n + 1.0));
                        add(row, n, k + 1, l, p, q - 1, I * g * sq * (k + 1.0));
                    }
                    if (p + 1 < M) {
                        add(row, n - 1, k + 1, l, p + 1, q, -I * g * sp1 * (k + 1.0));
                        add(row, n, k, l - 1, p + 1, q, -I * g * sp1 * (ng + 1.0));
                    }
                    if (q + 1 < M) {
                        add(row, n - 1, k, l + 1, p, q + 1, I * g * sq1 * (l + 1.0));
                        add(row, n, k - 1, l, p, q + 1, I * g * sq1 * (ng + 1.0));
                    }
                    if (p >= 1) {
                        add(row, n + 1, k - 1, l, p - 1, q, -I * g * sp * (n + 1.0));
                        add(row, n, k, l + 1, p - 1, q, -I * g * sp * (l + 1.0));
                    }
                }
        }
    }

    void build_drive(double E) {
        if (E == 0.0) return;
        const int N = basis_.N(), M = basis_.M();
        for (int rank = 0; rank < basis_.tls_count(); ++rank) {
            const auto [n, k, l] = basis_.tls_triple(rank);
            const int ng = N - n - k - l;
            for (int p = 0; p < M; ++p)
                for (int q = 0; q < M; ++q) {
                    const long row = flat(n, k, l, p, q);
                    add(row, n + 1, k, l - 1, p, q, I * E * (n + 1.0));
                    add(row, n, k + 1, l, p, q, I * E * (k + 1.0));
                    add(row, n - 1, k, l + 1, p, q, I * E * (l + 1.0));
                    add(row, n, k - 1, l, p, q, I * E * (ng + 1.0));
                    add(row, n - 1, k + 1, l, p, q, -I * E * (k + 1.0));
                    add(row, n, k, l - 1, p, q, -I * E * (ng + 1.0));
                    add(row, n + 1, k - 1, l, p, q, -I * E * (n + 1.0));
                    add(row, n, k, l + 1, p, q, -I * E * (l + 1.0));
                }
        }
    }

    void build_tls_decay(double gamma) {
        if (gamma == 0.0) return;
        const int M = basis_.M();
        for (int rank = 0; rank < basis_.tls_count(); ++rank) {
            const auto [n, k, l] = basis_.tls_triple(rank);
            for (int p = 0; p < M; ++p)
                for (int q = 0; q < M; ++q) {
                    const long row = flat(n, k, l, p, q);
                    add(row, n, k, l, p, q, -gamma * (n + 0.5 * (k + l)));
                    add(row, n + 1, k, l, p, q, gamma * (n + 1.0));
                }
        }
    }

    void build_pure_dephasing(double delta) {
        if (delta == 0.0) return;
        const int M = basis_.M();
        for (int rank = 0; rank < basis_.tls_count(); ++rank) {
            const auto [n, k, l] = basis_.tls_triple(rank);
            if (k + l == 0) continue;
            for (int p = 0; p < M; ++p)
                for (int q = 0; q < M; ++q)
                    add(flat(n, k, l, p, q), n, k, l, p, q, -delta * (k + l));
        }
    }

    void build_cavity_decay(double kappa) {
        if (kappa == 0.0) return;
        const int M = basis_.M();
        for (int rank = 0; rank < basis_.tls_count(); ++rank) {
            const auto [n, k, l] = basis_.tls_triple(rank);
            for (int p = 0; p < M; ++p)
                for (int q = 0; q < M; ++q) {
                    const long row = flat(n, k, l, p, q);
                    if (p + q > 0) add(row, n, k, l, p, q, -0.5 * kappa * (p + q));
                    if (p + 1 < M && q + 1 < M)
                        add(row, n, k, l, p + 1, q + 1, kappa * std::sqrt((p + 1.0) * (q + 1.0)));
                }
        }
    }

private:
    long flat(int n, int k, int l, int p, int q) const { return basis_.index_of({n, k, l, p, q}); }

    void add(long row, int n, int k, int l, int p, int q, cplx v) {
        if (v == cplx{0.0, 0.0}) return;
        if (!basis_.valid_triple(n, k, l)) return;
        if (p < 0 || p >= basis_.M() || q < 0 || q >= basis_.M()) return;
        out_.push_back({row, flat(n, k, l, p, q), v});
    }

    const SymBasis& basis_;
    std::vector<Triplet>& out_;
};

SymBasis make_basis(const ModelParams& params, int M, long max_dim) {
    params.validate();
    if (M < 1) throw std::invalid_argument("Liouvillian: M must be >= 1");
    long dim = tls_basis_size(params.N) * static_cast<long>(M) * M;
    if (dim > max_dim)
        throw std::invalid_argument("Liouvillian: dimension " + std::to_string(dim) +
                                    " exceeds ceiling " + std::to_string(max_dim));
    return SymBasis(params.N, M);
}

}  // namespace

Liouvillian Liouvillian::assemble(const ModelParams& params, int M, const AssemblyOptions& opts) {
    Liouvillian L;
    L.basis_ = std::make_shared<SymBasis>(make_basis(params, M, opts.max_dim));
    L.params_ = params;
    L.params_.fock_cutoff = M;

    auto base = std::make_shared<std::vector<Triplet>>();
    RowBuilder rb(*L.basis_, *base);
    rb.build_hamiltonian(params.delta0, params.delta1, params.g);
    rb.build_tls_decay(params.gamma);
    rb.build_pure_dephasing(params.delta);
    rb.build_cavity_decay(params.kappa);

    auto drive = std::make_shared<std::vector<Triplet>>();
    RowBuilder db(*L.basis_, *drive);
    db.build_drive(1.0);

    std::vector<Triplet> all = *base;
    for (const auto& t : *drive) all.push_back({t.row, t.col, params.E * t.val});
    L.total_ = SparseOp(L.basis_->dim(), L.basis_->dim(), std::move(all));
    L.base_ = std::move(base);
    L.drive_unit_ = std::move(drive);
    return L;
}

Liouvillian Liouvillian::with_drive(double E) const {
    Liouvillian L;
    L.basis_ = basis_;
    L.params_ = params_;
    L.params_.E = E;
    L.base_ = base_;
    L.drive_unit_ = drive_unit_;
    std::vector<Triplet> all = *base_;
    for (const auto& t : *drive_unit_) all.push_back({t.row, t.col, E * t.val});
    L.total_ = SparseOp(basis_->dim(), basis_->dim(), std::move(all));
    return L;
}

SparseOp Liouvillian::term_hamiltonian(const ModelParams& params, int M) {
    SymBasis basis = make_basis(params, M, AssemblyOptions{}.max_dim);
    std::vector<Triplet> ts;
    RowBuilder rb(basis, ts);
    rb.build_hamiltonian(params.delta0, params.delta1, params.g);
    rb.build_drive(params.E);
    return SparseOp(basis.dim(), basis.dim(), std::move(ts));
}

SparseOp Liouvillian::term_tls_decay(const ModelParams& params, int M) {
    SymBasis basis = make_basis(params, M, AssemblyOptions{}.max_dim);
    std::vector<Triplet> ts;
    RowBuilder rb(basis, ts);
    rb.build_tls_decay(params.gamma);
    return SparseOp(basis.dim(), basis.dim(), std::move(ts));
}

SparseOp Liouvillian::term_pure_dephasing(const ModelParams& params, int M) {
    SymBasis basis = make_basis(params, M, AssemblyOptions{}.max_dim);
    std::vector<Triplet> ts;
    RowBuilder rb(basis, ts);
    rb.build_pure_dephasing(params.delta);
    return SparseOp(basis.dim(), basis.dim(), std::move(ts));
}

SparseOp Liouvillian::term_cavity_decay(const ModelParams& params, int M) {
    SymBasis basis = make_basis(params, M, AssemblyOptions{}.max_dim);
    std::vector<Triplet> ts;
    RowBuilder rb(basis, ts);
    rb.build_cavity_decay(params.kappa);
    return SparseOp(basis.dim(), basis.dim(), std::move(ts));
}

void Liouvillian::dump_coo(std::ostream& os) const {
    os << "# dim " << dim() << " nnz " << total_.nnz() << " N " << params_.N << " M " << basis_->M()
       << "\n";
    total_.visit([&](long r, long c, cplx v) {
        os << r << " " << c << " " << v.real() << " " << v.imag() << "\n";
    });
}

}  // namespace dicke
