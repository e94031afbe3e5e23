#include "dicke/fullspace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include "dicke/ode.hpp"

namespace dicke::fullspace {

namespace {

constexpr cplx I{0.0, 1.0};

using SpMat = Eigen::SparseMatrix<cplx>;
using Trip = Eigen::Triplet<cplx>;

SpMat from_triplets(long rows, long cols, std::vector<Trip>& ts) {
    SpMat m(rows, cols);
    m.setFromTriplets(ts.begin(), ts.end());
    return m;
}

// Kronecker product via triplets; fine at oracle scale.
SpMat kron(const SpMat& A, const SpMat& B) {
    std::vector<Trip> ts;
    ts.reserve(static_cast<std::size_t>(A.nonZeros()) * B.nonZeros());
    for (int ka = 0; ka < A.outerSize(); ++ka)
        for (SpMat::InnerIterator ia(A, ka); ia; ++ia)
            for (int kb = 0; kb < B.outerSize(); ++kb)
                for (SpMat::InnerIterator ib(B, kb); ib; ++ib)
                    ts.emplace_back(ia.row() * B.rows() + ib.row(), ia.col() * B.cols() + ib.col(),
                                    ia.value() * ib.value());
    SpMat m(A.rows() * B.rows(), A.cols() * B.cols());
    m.setFromTriplets(ts.begin(), ts.end());
    return m;
}

SpMat identity(long n) {
    SpMat m(n, n);
    m.setIdentity();
    return m;
}

}  // namespace

Oracle::Oracle(int N, int M, OracleOptions opts) : N_(N), M_(M) {
    if (N < 1 || N > 20) throw std::invalid_argument("Oracle: N out of range");
    if (M < 1) throw std::invalid_argument("Oracle: M must be >= 1");
    tdim_ = 1L << N;
    dim_ = tdim_ * M;
    if (dim_ > opts.max_hilbert_dim)
        throw std::invalid_argument("Oracle: Hilbert dimension " + std::to_string(dim_) +
                                    " exceeds ceiling " + std::to_string(opts.max_hilbert_dim));
}

const SpMat& Oracle::sym_element(int n11, int n10, int n01) const {
    int n00 = N_ - n11 - n10 - n01;
    if (n11 < 0 || n10 < 0 || n01 < 0 || n00 < 0)
        throw std::invalid_argument("Oracle::sym_element: invalid triple");
    auto key = std::array<int, 3>{n11, n10, n01};
    auto it = sym_cache_.find(key);
    if (it != sym_cache_.end()) return it->second;

    // letters: 0 = sigma_11, 1 = sigma_10, 2 = sigma_01, 3 = sigma_00;
    // each distinct arrangement contributes one word |a><b| with
    // a-bit set for letters {11, 10} and b-bit set for letters {11, 01}.
    std::vector<int> letters;
    letters.insert(letters.end(), n11, 0);
    letters.insert(letters.end(), n10, 1);
    letters.insert(letters.end(), n01, 2);
    letters.insert(letters.end(), n00, 3);
    std::sort(letters.begin(), letters.end());
    std::vector<Trip> ts;
    do {
        long a = 0, b = 0;
        for (int site = 0; site < N_; ++site) {
            if (letters[site] == 0 || letters[site] == 1) a |= 1L << site;
            if (letters[site] == 0 || letters[site] == 2) b |= 1L << site;
        }
        ts.emplace_back(a, b, cplx{1.0, 0.0});
    } while (std::next_permutation(letters.begin(), letters.end()));
    return sym_cache_.emplace(key, from_triplets(tdim_, tdim_, ts)).first->second;
}

SpMat Oracle::site_op(int site, int a, int b) const {
    if (site < 0 || site >= N_) throw std::out_of_range("Oracle::site_op: site");
    std::vector<Trip> ts;
    for (long bits = 0; bits < tdim_; ++bits) {
        if (((bits >> site) & 1) != b) continue;
        long target = (bits & ~(1L << site)) | (static_cast<long>(a) << site);
        ts.emplace_back(target, bits, cplx{1.0, 0.0});
    }
    SpMat tls = from_triplets(tdim_, tdim_, ts);
    return kron(tls, identity(M_));
}

SpMat Oracle::collective_op(int a, int b) const {
    SpMat sum(dim_, dim_);
    for (int i = 0; i < N_; ++i) sum += site_op(i, a, b);
    return sum;
}

SpMat Oracle::annihilation() const {
    std::vector<Trip> ts;
    for (int p = 1; p < M_; ++p) ts.emplace_back(p - 1, p, cplx{std::sqrt(double(p)), 0.0});
    return kron(identity(tdim_), from_triplets(M_, M_, ts));
}

SpMat Oracle::hamiltonian(const ModelParams& p) const {
    SpMat b = annihilation();
    SpMat bdag = SpMat(b.adjoint());
    SpMat j10 = collective_op(1, 0);
    SpMat j01 = collective_op(0, 1);
    SpMat j11 = collective_op(1, 1);
    SpMat H = p.delta0 * SpMat(bdag * b) + p.delta1 * j11 + p.g * SpMat(j10 * b + j01 * bdag) +
              p.E * SpMat(j10 + j01);
    return H;
}

ReducedState Oracle::extract(const Eigen::MatrixXcd& rho) const {
    if (rho.rows() != dim_ || rho.cols() != dim_)
        throw std::invalid_argument("Oracle::extract: dimension mismatch");
    SymBasis basis(N_, M_);
    ReducedState s{N_, M_, Eigen::VectorXcd::Zero(basis.dim())};
    for (int rank = 0; rank < basis.tls_count(); ++rank) {
        const auto& t = basis.tls_triple(rank);
        const SpMat& el = sym_element(t[0], t[1], t[2]);
        for (int p = 0; p < M_; ++p)
            for (int q = 0; q < M_; ++q) {
                cplx acc{0.0, 0.0};
                for (int k = 0; k < el.outerSize(); ++k)
                    for (SpMat::InnerIterator it(el, k); it; ++it)
                        acc += rho(it.col() * M_ + p, it.row() * M_ + q);
                s.coeffs[basis.index_of({t[0], t[1], t[2], p, q})] = acc;
            }
    }
    return s;
}

Eigen::MatrixXcd Oracle::inject(const ReducedState& s, double herm_tol) const {
    if (s.N != N_ || s.M != M_) throw std::invalid_argument("Oracle::inject: dimension mismatch");
    SymBasis basis(N_, M_);
    if (hermiticity_residual(basis, s) > herm_tol * std::max(1.0, s.coeffs.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("Oracle::inject: state is not hermitian");
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim_, dim_);
    for (int rank = 0; rank < basis.tls_count(); ++rank) {
        const auto& t = basis.tls_triple(rank);
        double mult = sym_multiplicity(N_, t[0], t[1], t[2]);
        const SpMat& dual = sym_element(t[0], t[2], t[1]);  // trace-dual swaps n10 <-> n01
        for (int p = 0; p < M_; ++p)
            for (int q = 0; q < M_; ++q) {
                cplx v = s.coeffs[basis.index_of({t[0], t[1], t[2], p, q})] / mult;
                if (v == cplx{0.0, 0.0}) continue;
                for (int k = 0; k < dual.outerSize(); ++k)
                    for (SpMat::InnerIterator it(dual, k); it; ++it)
                        rho(it.row() * M_ + p, it.col() * M_ + q) += v;
            }
    }
    return rho;
}

FullGenerator::FullGenerator(const Oracle& oracle, const ModelParams& p)
    : gamma_(p.gamma), delta_(p.delta), kappa_(p.kappa) {
    H_ = oracle.hamiltonian(p);
    for (int i = 0; i < oracle.N(); ++i) {
        lower_.push_back(oracle.site_op(i, 0, 1));
        raise_.push_back(oracle.site_op(i, 1, 0));
        proj_e_.push_back(oracle.site_op(i, 1, 1));
        sz_.push_back(SpMat(oracle.site_op(i, 1, 1) - oracle.site_op(i, 0, 0)));
    }
    b_ = oracle.annihilation();
    bdag_ = SpMat(b_.adjoint());
    nph_ = SpMat(bdag_ * b_);
}

Eigen::MatrixXcd FullGenerator::apply(const Eigen::MatrixXcd& rho) const {
    Eigen::MatrixXcd out = I * (rho * H_ - H_ * rho);
    for (std::size_t i = 0; i < lower_.size(); ++i) {
        if (gamma_ != 0.0)
            out += gamma_ * (lower_[i] * rho * raise_[i]) -
                   (0.5 * gamma_) * (proj_e_[i] * rho + rho * proj_e_[i]);
        if (delta_ != 0.0) out += (0.5 * delta_) * (sz_[i] * rho * sz_[i] - rho);
    }
    if (kappa_ != 0.0)
        out += kappa_ * (b_ * rho * bdag_) - (0.5 * kappa_) * (nph_ * rho + rho * nph_);
    return out;
}

Eigen::MatrixXcd Oracle::apply_liouvillian(const ModelParams& p, const Eigen::MatrixXcd& rho) const {
    if (rho.rows() != dim_ || rho.cols() != dim_)
        throw std::invalid_argument("Oracle::apply_liouvillian: dimension mismatch");
    return FullGenerator(*this, p).apply(rho);
}

SpMat Oracle::superoperator(const ModelParams& p) const {
    SpMat id = identity(dim_);
    SpMat H = hamiltonian(p);
    SpMat S = I * (kron(SpMat(H.transpose()), id) - kron(id, H));
    auto add_jump = [&](const SpMat& c, double rate) {
        if (rate == 0.0) return;
        SpMat cc = SpMat(c.adjoint() * c);
        S += rate * kron(SpMat(c.conjugate()), c) -
             (0.5 * rate) * (kron(id, cc) + kron(SpMat(cc.transpose()), id));
    };
    for (int i = 0; i < N_; ++i) {
        add_jump(site_op(i, 0, 1), p.gamma);
        add_jump(SpMat(site_op(i, 1, 1) - site_op(i, 0, 0)), 0.5 * p.delta);
    }
    add_jump(annihilation(), p.kappa);
    return S;
}

Eigen::MatrixXcd Oracle::steady_state(const ModelParams& p) const {
    const long vdim = dim_ * dim_;
    if (vdim > 70000)
        throw std::invalid_argument("Oracle::steady_state: superoperator too large");
    SpMat S = superoperator(p);
    // replace the first row with the trace functional
    std::vector<Trip> ts;
    ts.reserve(S.nonZeros() + dim_);
    for (int k = 0; k < S.outerSize(); ++k)
        for (SpMat::InnerIterator it(S, k); it; ++it)
            if (it.row() != 0) ts.emplace_back(it.row(), it.col(), it.value());
    for (long j = 0; j < dim_; ++j) ts.emplace_back(0, j * dim_ + j, cplx{1.0, 0.0});
    SpMat A = from_triplets(vdim, vdim, ts);
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(vdim);
    rhs[0] = 1.0;
    Eigen::SparseLU<SpMat> lu(A);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error("Oracle::steady_state: factorization failed");
    Eigen::VectorXcd x = lu.solve(rhs);
    Eigen::MatrixXcd rho = Eigen::Map<Eigen::MatrixXcd>(x.data(), dim_, dim_);
    return 0.5 * (rho + rho.adjoint().eval());
}

Eigen::MatrixXcd Oracle::propagate(const ModelParams& p, const Eigen::MatrixXcd& rho0, double t_end,
                                   double rtol, double atol) const {
    FullGenerator gen(*this, p);
    Eigen::VectorXcd y = Eigen::Map<const Eigen::VectorXcd>(rho0.data(), dim_ * dim_);
    auto rhs = [&](double, const Eigen::VectorXcd& v) {
        Eigen::MatrixXcd rho = Eigen::Map<const Eigen::MatrixXcd>(v.data(), dim_, dim_);
        Eigen::MatrixXcd d = gen.apply(rho);
        return Eigen::VectorXcd(Eigen::Map<Eigen::VectorXcd>(d.data(), dim_ * dim_));
    };
    ode::Options opt;
    opt.rtol = rtol;
    opt.atol = atol;
    ode::integrate(rhs, y, 0.0, {t_end}, opt, nullptr);
    return Eigen::Map<Eigen::MatrixXcd>(y.data(), dim_, dim_);
}

std::vector<int> DickeEigenbasis::twol_values() const {
    std::vector<int> out;
    for (const auto& [twol, _] : blocks) out.push_back(twol);
    std::sort(out.rbegin(), out.rend());
    return out;
}

long DickeEigenbasis::degeneracy(int twol) const {
    auto it = blocks.find(twol);
    if (it == blocks.end()) throw std::out_of_range("DickeEigenbasis::degeneracy: no such l");
    return it->second.begin()->second.cols();
}

Eigen::MatrixXcd DickeEigenbasis::projector(int twol, int twom) const {
    const Eigen::MatrixXcd& V = blocks.at(twol).at(twom);
    return V * V.adjoint();
}

DickeEigenbasis dicke_eigenbasis(int N) {
    if (N < 1 || N > 10) throw std::invalid_argument("dicke_eigenbasis: N out of range");
    const long tdim = 1L << N;

    // J^2 = (J+ J- + J- J+)/2 + Jz^2, restricted per excitation sector
    Eigen::MatrixXcd jp = Eigen::MatrixXcd::Zero(tdim, tdim);
    for (long bits = 0; bits < tdim; ++bits)
        for (int i = 0; i < N; ++i)
            if (!((bits >> i) & 1)) jp(bits | (1L << i), bits) += 1.0;
    Eigen::MatrixXcd jm = jp.adjoint();
    Eigen::MatrixXcd j2 = 0.5 * (jp * jm + jm * jp);
    for (long bits = 0; bits < tdim; ++bits) {
        double mz = 0.5 * (2.0 * __builtin_popcountll(bits) - N);
        j2(bits, bits) += mz * mz;
    }

    DickeEigenbasis eb;
    eb.N = N;
    for (int n = 0; n <= N; ++n) {
        std::vector<long> sector;
        for (long bits = 0; bits < tdim; ++bits)
            if (__builtin_popcountll(bits) == n) sector.push_back(bits);
        const int sd = static_cast<int>(sector.size());
        Eigen::MatrixXcd block(sd, sd);
        for (int r = 0; r < sd; ++r)
            for (int c = 0; c < sd; ++c) block(r, c) = j2(sector[r], sector[c]);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block);
        const int twom = 2 * n - N;
        for (int v = 0; v < sd; ++v) {
            double lam = es.eigenvalues()[v];
            int twol = static_cast<int>(std::lround(std::sqrt(4.0 * lam + 1.0) - 1.0));
            if (std::abs(0.25 * twol * (twol + 2) - lam) > 1e-8)
                throw std::runtime_error("dicke_eigenbasis: eigenvalue is not l(l+1)");
            Eigen::MatrixXcd& blk = eb.blocks[twol][twom];
            Eigen::VectorXcd full = Eigen::VectorXcd::Zero(tdim);
            for (int r = 0; r < sd; ++r) full[sector[r]] = es.eigenvectors()(r, v);
            blk.conservativeResize(tdim, blk.cols() + 1);
            blk.col(blk.cols() - 1) = full;
        }
    }
    for (const auto& [twol, per_m] : eb.blocks) {
        long d = per_m.begin()->second.cols();
        for (const auto& [twom, blk] : per_m)
            if (blk.cols() != d)
                throw std::runtime_error("dicke_eigenbasis: uneven degeneracy across m");
    }
    return eb;
}

std::vector<double> oracle_dicke_coeffs(const Oracle& oracle, const DickeEigenbasis& eb, int twol,
                                        int twom) {
    const int N = eb.N;
    if ((twom + N) % 2 != 0) throw std::invalid_argument("oracle_dicke_coeffs: bad twom parity");
    const int n = (twom + N) / 2;
    const int K = std::min(n, N - n);
    Eigen::MatrixXcd proj = eb.projector(twol, twom);
    std::vector<double> a(K + 1, 0.0);
    for (int k = 0; k <= K; ++k) {
        const SpMat& el = oracle.sym_element(n - k, k, k);
        cplx tr{0.0, 0.0};
        for (int kk = 0; kk < el.outerSize(); ++kk)
            for (SpMat::InnerIterator it(el, kk); it; ++it) tr += it.value() * proj(it.col(), it.row());
        a[k] = tr.real() / sym_multiplicity(N, n - k, k, k);
    }
    return a;
}

}  // namespace dicke::fullspace
