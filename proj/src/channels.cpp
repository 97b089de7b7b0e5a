#include "qsl/channels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qsl {

DecayProfile DecayProfile::constant(double gamma) {
    if (!std::isfinite(gamma)) throw std::invalid_argument("DecayProfile: non-finite rate");
    DecayProfile p;
    p.kind = Kind::ConstantRate;
    p.gamma = gamma;
    return p;
}

DecayProfile DecayProfile::tabulated(std::vector<double> times, std::vector<double> rates) {
    if (times.size() < 2 || times.size() != rates.size())
        throw std::invalid_argument("DecayProfile: need matching time/rate tables, length >= 2");
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
        if (!(times[i] < times[i + 1]))
            throw std::invalid_argument("DecayProfile: times not strictly ascending");
    for (double r : rates)
        if (!std::isfinite(r)) throw std::invalid_argument("DecayProfile: non-finite rate");
    DecayProfile p;
    p.kind = Kind::Tabulated;
    p.times = std::move(times);
    p.rates = std::move(rates);
    return p;
}

double DecayProfile::rate_integral(double t) const {
    if (kind == Kind::ConstantRate) return gamma * t;
    if (t < times.front() - 1e-12 || t > times.back() + 1e-12)
        throw std::invalid_argument("DecayProfile: time outside tabulated range");
    t = std::clamp(t, times.front(), times.back());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        const double t0 = times[i], t1 = times[i + 1];
        if (t <= t0) break;
        if (t >= t1) {
            acc += 0.5 * (rates[i] + rates[i + 1]) * (t1 - t0);
        } else {
            const double frac = (t - t0) / (t1 - t0);
            const double rt = rates[i] + frac * (rates[i + 1] - rates[i]);
            acc += 0.5 * (rates[i] + rt) * (t - t0);
            break;
        }
    }
    return acc;
}

double survival_probability(const DecayProfile& profile, double t) {
    if (t < 0.0) throw std::invalid_argument("survival_probability: negative time");
    const double integral = profile.kind == DecayProfile::Kind::ConstantRate
                                ? profile.gamma * t
                                : profile.rate_integral(t);
    const double p = std::exp(-integral);
    if (p > 1.0 + 1e-12 || std::isnan(p))
        throw std::invalid_argument("survival_probability: P(t) left (0, 1]");
    // Huge exponents underflow; keep P strictly positive.
    return std::clamp(p, std::numeric_limits<double>::min(), 1.0);
}

KrausChannel::KrausChannel(std::vector<ComplexMatrix> kraus, std::string label)
    : ops_(std::move(kraus)), label_(std::move(label)) {
    if (ops_.empty()) throw std::invalid_argument("KrausChannel: need at least one operator");
    n_ = ops_.front().rows();
    for (const auto& f : ops_) {
        if (f.rows() != n_ || f.cols() != n_)
            throw std::invalid_argument("KrausChannel: operators must be square and same size");
        if (!all_finite(f)) throw std::invalid_argument("KrausChannel: non-finite entries");
    }
    ComplexMatrix sum(n_, n_);
    for (const auto& f : ops_) sum += adjoint(f) * f;
    if (max_abs_diff(sum, ComplexMatrix::identity(n_)) > kCompletenessTol)
        throw std::invalid_argument("KrausChannel: completeness violated");
}

KrausChannel amplitude_damping(const DecayProfile& profile, double t) {
    if (t < 0.0) throw std::invalid_argument("amplitude_damping: negative time");
    const double p = survival_probability(profile, t);
    ComplexMatrix f1(2, 2), f2(2, 2);
    f1(0, 0) = 1.0;
    f1(1, 1) = std::sqrt(p);
    f2(0, 1) = std::sqrt(std::max(0.0, 1.0 - p));
    return KrausChannel({f1, f2}, "amplitude-damping");
}

KrausChannel dephasing(const DecayProfile& profile, double omega, double t) {
    if (t < 0.0) throw std::invalid_argument("dephasing: negative time");
    const double p = survival_probability(profile, t);
    const cplx em = std::exp(cplx(0.0, -omega * t / 2.0));
    const cplx ep = std::exp(cplx(0.0, omega * t / 2.0));
    const double a = std::sqrt((1.0 + p) / 2.0);
    const double b = std::sqrt(std::max(0.0, (1.0 - p) / 2.0));
    ComplexMatrix f1(2, 2), f2(2, 2);
    f1(0, 0) = a * em;
    f1(1, 1) = a * ep;
    f2(0, 0) = b * em;
    f2(1, 1) = -b * ep;
    return KrausChannel({f1, f2}, "dephasing");
}

KrausChannel unitary_channel(const HermitianMatrix& h, double t) {
    return KrausChannel({exp_i_hermitian(h, -t)}, "unitary");
}

KrausChannel pad_identity_kraus(std::size_t n, std::size_t d) {
    if (d < 1) throw std::invalid_argument("pad_identity_kraus: need d >= 1");
    std::vector<ComplexMatrix> ops;
    ops.push_back(ComplexMatrix::identity(n));
    for (std::size_t i = 1; i < d; ++i) ops.push_back(ComplexMatrix::zeros(n, n));
    return KrausChannel(std::move(ops), "identity");
}

KrausChannel pad_with_zeros(const KrausChannel& channel, std::size_t d) {
    if (d < channel.kraus_count())
        throw std::invalid_argument("pad_with_zeros: target count below current");
    std::vector<ComplexMatrix> ops = channel.kraus();
    while (ops.size() < d) ops.push_back(ComplexMatrix::zeros(channel.dim(), channel.dim()));
    return KrausChannel(std::move(ops), channel.label());
}

KrausChannel tensor_power(const KrausChannel& channel, std::size_t n_copies) {
    if (n_copies < 1) throw std::invalid_argument("tensor_power: need at least one copy");
    double total = 1.0;
    for (std::size_t i = 0; i < n_copies; ++i) total *= static_cast<double>(channel.dim());
    if (total > 64.0) throw std::invalid_argument("tensor_power: size budget n^N <= 64 exceeded");
    if (n_copies == 1) return channel;

    std::vector<ComplexMatrix> ops = channel.kraus();
    for (std::size_t c = 1; c < n_copies; ++c) {
        std::vector<ComplexMatrix> next;
        next.reserve(ops.size() * channel.kraus_count());
        for (const auto& a : ops)
            for (const auto& b : channel.kraus()) next.push_back(kron(a, b));
        ops = std::move(next);
    }
    return KrausChannel(std::move(ops), channel.label() + "^" + std::to_string(n_copies));
}

namespace {

DensityMatrix kraus_sum(const std::vector<ComplexMatrix>& ops, const ComplexMatrix& rho) {
    ComplexMatrix out(rho.rows(), rho.cols());
    for (const auto& f : ops) out += f * rho * adjoint(f);
    out = hermitize(out);
    // Kraus sums preserve the trace; renormalize the arithmetic dust so the
    // result satisfies the DensityMatrix invariants exactly.
    const double tr = std::real(trace(out));
    if (std::abs(tr - 1.0) > 1e-8) throw std::runtime_error("apply: trace drifted");
    out *= cplx(1.0 / tr, 0.0);
    return DensityMatrix(out);
}

}  // namespace

DensityMatrix apply(const KrausChannel& channel, const DensityMatrix& rho) {
    if (rho.dim() != channel.dim()) throw std::invalid_argument("apply: dimension mismatch");
    return kraus_sum(channel.kraus(), rho.matrix());
}

DensityMatrix apply_extended(const KrausChannel& channel, const DensityMatrix& rho_sa,
                             std::size_t ancilla_dim) {
    if (ancilla_dim < 1) throw std::invalid_argument("apply_extended: ancilla dimension < 1");
    if (rho_sa.dim() != channel.dim() * ancilla_dim)
        throw std::invalid_argument("apply_extended: dimension mismatch");
    const ComplexMatrix ia = ComplexMatrix::identity(ancilla_dim);
    std::vector<ComplexMatrix> ext;
    ext.reserve(channel.kraus_count());
    for (const auto& f : channel.kraus()) ext.push_back(kron(f, ia));
    return kraus_sum(ext, rho_sa.matrix());
}

KrausChannel channel_at(const ChannelModel& model, double t) {
    return std::visit(
        [&](const auto& m) -> KrausChannel {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, AmplitudeDampingModel>) {
                return amplitude_damping(m.profile, t);
            } else if constexpr (std::is_same_v<T, DephasingModel>) {
                return dephasing(m.profile, m.omega, t);
            } else if constexpr (std::is_same_v<T, UnitaryModel>) {
                return unitary_channel(HermitianMatrix(m.hamiltonian), t);
            } else if constexpr (std::is_same_v<T, CustomModel>) {
                return KrausChannel(m.kraus, m.label);
            } else {
                return tensor_power(channel_at(*m.base, t), m.copies);
            }
        },
        model.value);
}

}  // namespace qsl
