// Density matrices, pure states, Bures fidelity and angle, purification,
// and the entanglement entropy used to grade optimal inputs.
#pragma once

#include <vector>

#include "qsl/complex_matrix.hpp"
#include "qsl/linalg.hpp"

namespace qsl {

class DensityMatrix {
public:
    explicit DensityMatrix(const ComplexMatrix& m);
    const ComplexMatrix& matrix() const { return m_; }
    std::size_t dim() const { return m_.rows(); }

private:
    ComplexMatrix m_;
};

class PureState {
public:
    explicit PureState(std::vector<cplx> amplitudes);
    const std::vector<cplx>& amplitudes() const { return amp_; }
    std::size_t dim() const { return amp_.size(); }
    DensityMatrix density() const;  // |psi><psi|

private:
    std::vector<cplx> amp_;
};

struct Purification {
    PureState state;          // lives on system (x) ancilla
    std::size_t ancilla_dim;  // rank of the purified state
};

// Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)), clipped into [0, 1].
double fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2);

// arccos of fidelity, in [0, pi/2].
double bures_angle(const DensityMatrix& rho1, const DensityMatrix& rho2);

// Pure state on system (x) ancilla whose partial trace over the ancilla
// recovers rho; ancilla dimension equals the rank (eigenvalues > 1e-10).
Purification purify(const DensityMatrix& rho);

PureState ghz(std::size_t n_qubits);             // (|0..0> + |1..1>)/sqrt(2)
PureState separable_plus(std::size_t n_qubits);  // |+...+>

// Normalized von Neumann entropy of the reduced state across the cut:
// S(reduced)/log2(min side dimension), in [0, 1]. Zero when one side is trivial.
double entanglement_entropy(const PureState& psi,
                            const std::vector<std::size_t>& cut,
                            const std::vector<std::size_t>& dims);

}  // namespace qsl
