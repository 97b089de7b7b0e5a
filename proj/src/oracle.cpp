#include "qsl/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qsl/linalg.hpp"
#include "qsl/qsl.hpp"
#include "qsl/sdp.hpp"

namespace qsl {

std::uint64_t SampleStream::mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t SampleStream::next_u64() {
    std::uint64_t h = mix(seed_ ^ 0xA02BDBF7BB3C0A7ULL);
    h = mix(h ^ sample_ * 0xD6E8FEB86659FD93ULL);
    h = mix(h ^ counter_ * 0xCA5A826395121157ULL);
    ++counter_;
    return h;
}

double SampleStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SampleStream::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // (0, 1] to keep the log finite.
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

PureState haar_state(std::size_t dim, std::uint64_t seed, std::uint64_t sample) {
    SampleStream s(seed, sample);
    std::vector<cplx> amp(dim);
    double norm2 = 0.0;
    for (auto& a : amp) {
        a = cplx(s.gaussian(), s.gaussian());
        norm2 += std::norm(a);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& a : amp) a *= inv;
    return PureState(std::move(amp));
}

OracleReport random_state_min_fidelity(const KrausChannel& channel, std::size_t ancilla_dim,
                                       std::size_t samples, std::uint64_t seed,
                                       double reference_cos) {
    if (ancilla_dim < 1 || samples < 1)
        throw std::invalid_argument("random_state_min_fidelity: bad arguments");
    const std::size_t n = channel.dim();
    const std::size_t dim = n * ancilla_dim;

    std::vector<double> values(samples);
#pragma omp parallel
    {
        std::vector<cplx> amp(dim);  // per-thread scratch, avoids heap churn
#pragma omp for schedule(static)
        for (long long kk = 0; kk < static_cast<long long>(samples); ++kk) {
            const std::size_t k = static_cast<std::size_t>(kk);
            // Same draws and normalization as haar_state, so the winning
            // index regenerates to exactly the witness evaluated here.
            SampleStream stream(seed, k);
            double norm2 = 0.0;
            for (auto& a : amp) {
                a = cplx(stream.gaussian(), stream.gaussian());
                norm2 += std::norm(a);
            }
            const double inv = 1.0 / std::sqrt(norm2);
            for (auto& a : amp) a *= inv;
            // F^2 = sum_i |<psi|(F_i (x) I)|psi>|^2 for a pure input.
            double f2 = 0.0;
            for (const auto& f : channel.kraus()) {
                cplx ov = 0.0;
                for (std::size_t r = 0; r < n; ++r)
                    for (std::size_t c = 0; c < ancilla_dim; ++c) {
                        cplx acc = 0.0;
                        for (std::size_t s = 0; s < n; ++s)
                            acc += f(r, s) * amp[s * ancilla_dim + c];
                        ov += std::conj(amp[r * ancilla_dim + c]) * acc;
                    }
                f2 += std::norm(ov);
            }
            values[k] = std::sqrt(std::min(1.0, std::max(0.0, f2)));
        }
    }

    std::size_t best = 0;
    for (std::size_t k = 1; k < samples; ++k)
        if (values[k] < values[best]) best = k;

    OracleReport rep;
    rep.samples = samples;
    rep.seed = seed;
    rep.best_value = values[best];
    rep.violation = reference_cos - rep.best_value;
    rep.witness_state = haar_state(dim, seed, best);
    return rep;
}

OracleReport random_state_min_fidelity_pair(const KrausChannel& channel1,
                                            const KrausChannel& channel2,
                                            std::size_t ancilla_dim, std::size_t samples,
                                            std::uint64_t seed, double reference_cos) {
    if (ancilla_dim < 1 || samples < 1)
        throw std::invalid_argument("random_state_min_fidelity_pair: bad arguments");
    if (channel1.dim() != channel2.dim())
        throw std::invalid_argument("random_state_min_fidelity_pair: dimension mismatch");
    const std::size_t dim = channel1.dim() * ancilla_dim;

    std::vector<double> values(samples);
#pragma omp parallel for schedule(static)
    for (long long kk = 0; kk < static_cast<long long>(samples); ++kk) {
        const std::size_t k = static_cast<std::size_t>(kk);
        const DensityMatrix rho = haar_state(dim, seed, k).density();
        const DensityMatrix out1 = apply_extended(channel1, rho, ancilla_dim);
        const DensityMatrix out2 = apply_extended(channel2, rho, ancilla_dim);
        values[k] = fidelity(out1, out2);
    }

    std::size_t best = 0;
    for (std::size_t k = 1; k < samples; ++k)
        if (values[k] < values[best]) best = k;

    OracleReport rep;
    rep.samples = samples;
    rep.seed = seed;
    rep.best_value = values[best];
    rep.violation = reference_cos - rep.best_value;
    rep.witness_state = haar_state(dim, seed, best);
    return rep;
}

namespace {

ComplexMatrix sample_contraction(std::size_t d1, std::size_t d2, std::uint64_t seed,
                                 std::uint64_t sample) {
    SampleStream s(seed, sample);
    ComplexMatrix w(d1, d2);
    for (auto& v : w.data()) v = cplx(s.gaussian(), s.gaussian());
    const double sigma = operator_norm(w);
    double radius = 1.0;
    // Every fifth sample probes the interior of the contraction ball.
    if (sample % 5 == 4) radius = s.uniform();
    if (sigma > 0.0) w *= cplx(radius / sigma, 0.0);
    return w;
}

}  // namespace

OracleReport random_w_max(const KrausChannel& channel1, const KrausChannel& channel2,
                          std::size_t samples, std::uint64_t seed, double reference_cos,
                          const std::vector<ComplexMatrix>& injected) {
    if (samples < 1) throw std::invalid_argument("random_w_max: bad sample count");
    if (channel1.dim() != channel2.dim())
        throw std::invalid_argument("random_w_max: dimension mismatch");
    const std::size_t d1 = channel1.kraus_count();
    const std::size_t d2 = channel2.kraus_count();

    std::vector<ComplexMatrix> ws;
    ws.reserve(samples + injected.size() + 1);
    {
        ComplexMatrix eye(d1, d2);
        for (std::size_t i = 0; i < std::min(d1, d2); ++i) eye(i, i) = 1.0;
        ws.push_back(std::move(eye));
    }
    for (const auto& w : injected) {
        if (w.rows() != d1 || w.cols() != d2)
            throw std::invalid_argument("random_w_max: injected W has wrong shape");
        ws.push_back(w);
    }
    for (std::size_t k = 0; k < samples; ++k)
        ws.push_back(sample_contraction(d1, d2, seed, k));

    std::vector<double> values(ws.size());
#pragma omp parallel for schedule(static)
    for (long long kk = 0; kk < static_cast<long long>(ws.size()); ++kk) {
        const std::size_t k = static_cast<std::size_t>(kk);
        const ComplexMatrix kw = build_kw(channel1.kraus(), channel2.kraus(), ws[k]);
        const auto eg = eig_hermitian(HermitianMatrix(hermitize(kw + adjoint(kw))));
        values[k] = 0.5 * eg.eigenvalues.front();
    }

    std::size_t best = 0;
    for (std::size_t k = 1; k < values.size(); ++k)
        if (values[k] > values[best]) best = k;

    OracleReport rep;
    rep.samples = samples;
    rep.seed = seed;
    rep.best_value = values[best];
    rep.violation = rep.best_value - reference_cos;
    rep.witness_w = ws[best];
    return rep;
}

OracleReport certify_saturation(const PureState& state, const KrausChannel& channel,
                                double expected_cos) {
    const std::size_t n = channel.dim();
    if (state.dim() % n != 0)
        throw std::invalid_argument("certify_saturation: state dimension not divisible by system");
    const std::size_t anc = state.dim() / n;
    const KrausChannel id = pad_identity_kraus(n, 1);
    const double f = achieved_fidelity(id, channel, state, anc);

    OracleReport rep;
    rep.samples = 1;
    rep.seed = 0;
    rep.best_value = f;
    rep.violation = std::abs(f - expected_cos);
    rep.witness_state = state;
    return rep;
}

}  // namespace qsl
