// Semidefinite solver for the contraction problem
//
//   max 1/2 t   s.t.  [[I, W],[W†, I]] >= 0,   K_W + K_W† - t I >= 0,
//
// with K_W = sum_ij w_ij F_1i† F_2j, together with its dual
//
//   min 1/2(Tr P + Tr Q)  s.t.  [[P, M†(rho)],[M(rho), Q]] >= 0,
//                               rho >= 0, Tr rho = 1,
//
// where M(rho)_ij = Tr(rho F_1i† F_2j). One feasible-start Nesterov-Todd
// predictor-corrector run on the realified problem produces certificates for
// both sides. The same machinery solves the nuclear-norm program
// max Re Tr(M†W) over ||W|| <= 1, whose optimum is the trace norm of M.
#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "qsl/complex_matrix.hpp"
#include "qsl/linalg.hpp"
#include "qsl/realmat.hpp"

namespace qsl {

// SDP variable W with operator norm <= 1 (+1e-8 slack).
class ContractionMatrix {
public:
    explicit ContractionMatrix(const ComplexMatrix& w);
    const ComplexMatrix& matrix() const { return w_; }

    static constexpr double kNormSlack = 1e-8;

private:
    ComplexMatrix w_;
};

struct SdpOptions {
    double tol = 1e-8;
    int max_iter = 200;
};

struct SdpSolution {
    double primal_value = 0.0;  // max 1/2 t
    double dual_value = 0.0;    // min 1/2 (Tr P + Tr Q)
    double gap = 0.0;           // |primal - dual|
    ComplexMatrix w_opt;        // d1 x d2 contraction
    ComplexMatrix rho_opt;      // optimal system state (channel mode)
    ComplexMatrix p_opt, q_opt; // dual block certificates
    std::vector<std::pair<std::string, double>> residuals;
    int iterations = 0;
    bool converged = false;
    std::string message;
    // (primal objective, dual objective) at each iterate; weak duality holds
    // row-wise for a feasible-start method.
    std::vector<std::array<double, 2>> objective_trace;

    double residual(const std::string& name) const;
    double max_residual() const;
};

// K_W = sum_ij w_ij F_1i† F_2j; linear in W.
ComplexMatrix build_kw(const std::vector<ComplexMatrix>& kraus1,
                       const std::vector<ComplexMatrix>& kraus2,
                       const ComplexMatrix& w);

// Both solve the same primal/dual pair; kept as separate entry points because
// callers certify different sides of the solution.
SdpSolution solve_primal(const std::vector<ComplexMatrix>& kraus1,
                         const std::vector<ComplexMatrix>& kraus2,
                         const SdpOptions& options = {});
SdpSolution solve_dual(const std::vector<ComplexMatrix>& kraus1,
                       const std::vector<ComplexMatrix>& kraus2,
                       const SdpOptions& options = {});

// Trace norm of M as an SDP: primal_value = max Re Tr(M†W) over contractions,
// dual_value = min 1/2(Tr P + Tr Q) over the PSD block constraint.
SdpSolution nuclear_norm_sdp(const ComplexMatrix& m, const SdpOptions& options = {});

}  // namespace qsl
