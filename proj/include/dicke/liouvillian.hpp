#pragma once

#include <iosfwd>
#include <memory>

#include "dicke/model.hpp"
#include "dicke/sparse.hpp"
#include "dicke/symbasis.hpp"

namespace dicke {

struct AssemblyOptions {
    long max_dim = 2'000'000;  // reject T(N) * M^2 beyond this
};

// Sparse generator of the reduced master equation, d/dt c = L c, acting on
// the coefficient vector of a ReducedState. The generator is the sum of the
// commutator term and the three dissipators; the drive part is kept separate
// so a drive quench reassembles in O(nnz of the drive term).
class Liouvillian {
public:
    static Liouvillian assemble(const ModelParams& params, int M, const AssemblyOptions& opts = {});

    // Individual terms on the same basis, mainly for structure tests.
    static SparseOp term_hamiltonian(const ModelParams& params, int M);
    static SparseOp term_tls_decay(const ModelParams& params, int M);
    static SparseOp term_pure_dephasing(const ModelParams& params, int M);
    static SparseOp term_cavity_decay(const ModelParams& params, int M);

    const SymBasis& basis() const { return *basis_; }
    const ModelParams& params() const { return params_; }
    long dim() const { return basis_->dim(); }
    const SparseOp& op() const { return total_; }

    Eigen::VectorXcd apply(const Eigen::VectorXcd& c) const { return total_.apply(c); }

    // Same generator with a different drive amplitude; everything except the
    // drive term is reused.
    Liouvillian with_drive(double E) const;

    // Coordinate-list text dump: "row col re im" lines.
    void dump_coo(std::ostream& os) const;

private:
    Liouvillian() = default;
    std::shared_ptr<const SymBasis> basis_;
    ModelParams params_;
    std::shared_ptr<const std::vector<Triplet>> base_;        // all terms except the drive
    std::shared_ptr<const std::vector<Triplet>> drive_unit_;  // drive term at E = 1
    SparseOp total_;
};

}  // namespace dicke
