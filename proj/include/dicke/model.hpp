#pragma once

#include <cmath>
#include <stdexcept>

namespace dicke {

// hbar in meV*ns. Couplings quoted as energies convert to angular
// frequencies in 1/ns via mev_to_rate().
inline constexpr double hbar_mev_ns = 6.582120e-4;

inline double mev_to_rate(double energy_mev) { return energy_mev / hbar_mev_ns; }

// Parameters of the resonantly driven Dicke system. All rates and angular
// frequencies share one time unit; the solvers expect the internal unit
// system produced by to_internal_units() (gamma = 1 whenever gamma > 0).
struct ModelParams {
    int N = 1;             // number of two-level systems
    double delta0 = 0.0;   // cavity detuning
    double delta1 = 0.0;   // TLS detuning
    double g = 0.0;        // TLS-cavity coupling
    double E = 0.0;        // classical drive amplitude
    double gamma = 1.0;    // individual TLS decay rate
    double delta = 0.0;    // pure dephasing rate
    double kappa = 0.0;    // cavity decay rate
    int fock_cutoff = 0;   // photon levels M; 0 requests auto selection

    void validate() const {
        if (N < 1) throw std::invalid_argument("ModelParams: N must be >= 1");
        if (fock_cutoff < 0) throw std::invalid_argument("ModelParams: fock_cutoff must be >= 1 or 0 (auto)");
        auto finite = [](double x) { return std::isfinite(x); };
        if (!finite(delta0) || !finite(delta1) || !finite(g) || !finite(E))
            throw std::invalid_argument("ModelParams: couplings must be finite");
        if (!finite(gamma) || !finite(delta) || !finite(kappa))
            throw std::invalid_argument("ModelParams: rates must be finite");
        if (gamma < 0 || delta < 0 || kappa < 0)
            throw std::invalid_argument("ModelParams: rates must be >= 0");
    }
};

// Rescale so that gamma = 1; all other rates and couplings become ratios to
// gamma and times are measured in 1/gamma. Falls back to g = 1 when gamma
// vanishes. Dimensionless outputs are invariant under this rescaling.
inline ModelParams to_internal_units(const ModelParams& p) {
    p.validate();
    double unit = p.gamma;
    if (unit == 0.0) unit = std::abs(p.g);
    if (unit == 0.0)
        throw std::invalid_argument("to_internal_units: gamma and g both zero, no rate scale");
    ModelParams q = p;
    q.delta0 /= unit;
    q.delta1 /= unit;
    q.g /= unit;
    q.E /= unit;
    q.gamma /= unit;
    q.delta /= unit;
    q.kappa /= unit;
    return q;
}

}  // namespace dicke
