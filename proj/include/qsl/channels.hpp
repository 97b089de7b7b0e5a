// Kraus-operator channels: validation, the concrete noise models,
// tensor powers, and channel application with or without an ancilla.
#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "qsl/complex_matrix.hpp"
#include "qsl/linalg.hpp"
#include "qsl/states.hpp"

namespace qsl {

// Decay-rate profile behind P(t) = exp(-integral of gamma).
// Non-Markovian rates may dip negative as long as P stays in (0, 1].
struct DecayProfile {
    enum class Kind { ConstantRate, Tabulated };

    Kind kind = Kind::ConstantRate;
    double gamma = 0.0;               // constant-rate case
    std::vector<double> times;        // tabulated case, strictly ascending
    std::vector<double> rates;

    static DecayProfile constant(double gamma);
    static DecayProfile tabulated(std::vector<double> times, std::vector<double> rates);

    // Trapezoid cumulative integral of the rate up to t.
    double rate_integral(double t) const;
};

double survival_probability(const DecayProfile& profile, double t);

class KrausChannel {
public:
    KrausChannel(std::vector<ComplexMatrix> kraus, std::string label = "");

    std::size_t dim() const { return n_; }
    std::size_t kraus_count() const { return ops_.size(); }
    const std::vector<ComplexMatrix>& kraus() const { return ops_; }
    const std::string& label() const { return label_; }

    static constexpr double kCompletenessTol = 1e-10;

private:
    std::size_t n_ = 0;
    std::vector<ComplexMatrix> ops_;
    std::string label_;
};

KrausChannel amplitude_damping(const DecayProfile& profile, double t);
KrausChannel dephasing(const DecayProfile& profile, double omega, double t);
KrausChannel unitary_channel(const HermitianMatrix& h, double t);  // single Kraus e^{-iHt}

// Identity channel on dimension n represented with d Kraus operators {I, 0, ..., 0}.
KrausChannel pad_identity_kraus(std::size_t n, std::size_t d);
// Same channel with zero operators appended until it has d Kraus operators.
KrausChannel pad_with_zeros(const KrausChannel& channel, std::size_t d);

// N independent copies acting on the composite system; rejects n^N > 64.
KrausChannel tensor_power(const KrausChannel& channel, std::size_t n_copies);

DensityMatrix apply(const KrausChannel& channel, const DensityMatrix& rho);
// Kraus operators F_i (x) I_A acting on the system factor of rho_sa.
DensityMatrix apply_extended(const KrausChannel& channel, const DensityMatrix& rho_sa,
                             std::size_t ancilla_dim);

// Parametric families used by the CLI and the minimum-time search.
struct AmplitudeDampingModel { DecayProfile profile; };
struct DephasingModel { DecayProfile profile; double omega = 0.0; };
struct UnitaryModel { ComplexMatrix hamiltonian; };
struct CustomModel { std::vector<ComplexMatrix> kraus; std::string label; };

struct ChannelModel;

struct TensorPowerModel {
    std::shared_ptr<ChannelModel> base;
    std::size_t copies = 1;
};

struct ChannelModel {
    std::variant<AmplitudeDampingModel, DephasingModel, UnitaryModel, CustomModel,
                 TensorPowerModel> value;
};

// Channel of the model at time t. CustomModel ignores t.
KrausChannel channel_at(const ChannelModel& model, double t);

}  // namespace qsl
