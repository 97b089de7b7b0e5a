// Quantum-speed-limit quantities: the unitary angle metric, channel distance,
// closed forms for the two noise models, alpha/beta bounds for composite
// systems, minimum-time inversion, and optimal-input extraction.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qsl/channels.hpp"
#include "qsl/sdp.hpp"
#include "qsl/states.hpp"

namespace qsl {

enum class Method {
    Sdp,
    ClosedFormAd,
    ClosedFormDephasing,
    Unitary,
    AlphaBound,
    RowBound,
    BetaLower,
};

std::string method_name(Method m);

struct QslResult {
    double cos_d = 1.0;
    double d = 0.0;  // arccos(clamp(cos_d, 0, 1)), always <= pi/2
    Method method = Method::Sdp;
    std::optional<ContractionMatrix> w_opt;
    std::optional<Purification> optimal_input;
    std::optional<double> gap;
    std::optional<double> saturation_error;  // |F achieved by optimal_input - cos_d|
    bool converged = true;
    std::optional<SdpSolution> sdp;
};

struct BoundPair {
    double lower = 0.0;  // from beta-type feasible states
    double upper = 0.0;  // from alpha-type W choices
    std::size_t n_copies = 1;
};

// Eigen-angles theta_j of a unitary (eigenvalues e^{-i theta_j}), the plain
// max-angle norm, and the global-phase-minimized norm from the largest
// circular gap.
struct UnitaryAngles {
    std::vector<double> angles;  // in (-pi, pi], ascending
    double max_norm = 0.0;       // max |theta_j|
    double gauge_norm = 0.0;     // min over global phase of max |theta_j|
};

UnitaryAngles unitary_angle_spectrum(const ComplexMatrix& u);

// Maximal rotation angle of a unitary, capped at pi/2.
double unitary_max_angle(const ComplexMatrix& u);

QslResult unitary_distance(const HermitianMatrix& h, double t);
// 2 theta / (E_max - E_min); empty when the spectrum is degenerate and theta > 0.
std::optional<double> unitary_min_time(const HermitianMatrix& h, double theta);

// Exact distance d(K1, K2) through the SDP, with a certified optimal input.
QslResult channel_distance(const KrausChannel& a, const KrausChannel& b,
                           const SdpOptions& options = {});

QslResult closed_form_amplitude_damping(const DecayProfile& profile, double t);
QslResult closed_form_dephasing(const DecayProfile& profile, double omega, double t);

// Least-squares alpha of the identity-in-span bound; empty when the identity
// is not in the Kraus span (residual > 1e-8). Guarantees cos d(I,K) >= alpha.
std::optional<double> alpha_bound(const KrausChannel& channel);

// Best lower bound on cos d(I, K) over W with one nonzero row (a D-vector
// contraction); solved by the same SDP machinery.
double row_structured_bound(const KrausChannel& channel, const SdpOptions& options = {});

// arccos(alpha^N); requires alpha to exist.
double composite_alpha_bound(const KrausChannel& channel, std::size_t n_copies);

double separable_angle(const DecayProfile& profile, double omega, double t, std::size_t n_copies);
double ghz_angle(const DecayProfile& profile, double omega, double t, std::size_t n_copies);

// Lower/upper sandwich for dephasing tensor powers.
BoundPair dephasing_composite_bounds(const DecayProfile& profile, double omega, double t,
                                     std::size_t n_copies);

struct MinTimeSearch {
    double t_max = 10.0;
    double step = 0.01;
};

enum class MinTimeStatus { Found, NotReached, UnreachableAlphaCertificate, Unbounded };

struct MinTimeResult {
    std::optional<double> time;
    MinTimeStatus status = MinTimeStatus::Found;
    // Minimum alpha over the scanned grid; positive values certify that no
    // state can be rotated to pi/2.
    std::optional<double> alpha_certificate;
};

// First upward crossing of theta by d(I, K_t); closed forms where available,
// grid scan plus bisection to 1e-9 otherwise.
MinTimeResult min_time(const ChannelModel& model, double theta, const MinTimeSearch& search,
                       const SdpOptions& options = {});

// How the reported optimal input was chosen and how entangled it is.
struct OptimalInputReport {
    Purification input;
    double saturation_error = 0.0;
    double ent_reported = 0.0;        // mixed rho: system|ancilla cut; pure: first-qubit|rest
    double ent_first_qubit = 0.0;     // first-qubit|rest cut on system (x) ancilla
    double ent_system_ancilla = 0.0;  // 0 when the ancilla is trivial
    std::string candidate;            // which certified candidate was selected
};

// Deterministic extraction of a certified saturating input from the dual
// solution. Interior-point iterates land in the relative interior of flat
// optimal faces, so the raw purification is only one valid choice; this
// selects the least-entangled candidate that still certifies.
OptimalInputReport report_optimal_input(const KrausChannel& a, const KrausChannel& b,
                                        const SdpSolution& sol);

// F_B between the two channel outputs for the pure input psi on system (x) ancilla.
double achieved_fidelity(const KrausChannel& a, const KrausChannel& b, const PureState& psi,
                         std::size_t ancilla_dim);

}  // namespace qsl
