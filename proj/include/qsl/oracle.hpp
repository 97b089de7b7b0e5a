// Brute-force verification: sampled fidelity minimization over Haar-random
// inputs (one-sided from above the true minimum) and sampled contraction
// maximization (one-sided from below), plus saturation certification.
//
// Randomness is counter-based: every draw is a pure function of
// (seed, sample index, draw index), so reports are bit-reproducible for a
// fixed configuration, independent of thread count, and prefixes nest when
// the sample count grows.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qsl/channels.hpp"
#include "qsl/states.hpp"

namespace qsl {

// SplitMix64-style finalizer chain keyed by (seed, sample, counter).
class SampleStream {
public:
    SampleStream(std::uint64_t seed, std::uint64_t sample) : seed_(seed), sample_(sample) {}

    std::uint64_t next_u64();
    double uniform();   // [0, 1)
    double gaussian();  // standard normal, Box-Muller

    static std::uint64_t mix(std::uint64_t z);

private:
    std::uint64_t seed_;
    std::uint64_t sample_;
    std::uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

PureState haar_state(std::size_t dim, std::uint64_t seed, std::uint64_t sample);

struct OracleReport {
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    double best_value = 0.0;
    // Signed inconsistency: positive values flag a violated bound.
    double violation = 0.0;
    std::optional<PureState> witness_state;
    std::optional<ComplexMatrix> witness_w;
};

// Minimum of F_B[rho_SA, (K (x) I_A)(rho_SA)] over sampled Haar-random pure
// inputs. violation = reference_cos - best_value (sampling can only
// overestimate the true minimum).
OracleReport random_state_min_fidelity(const KrausChannel& channel, std::size_t ancilla_dim,
                                       std::size_t samples, std::uint64_t seed,
                                       double reference_cos);

// Two-channel variant: minimum of F_B[(K1 (x) I)(rho), (K2 (x) I)(rho)] over
// sampled pure inputs. Slower (both outputs are mixed); same conventions.
OracleReport random_state_min_fidelity_pair(const KrausChannel& channel1,
                                            const KrausChannel& channel2,
                                            std::size_t ancilla_dim, std::size_t samples,
                                            std::uint64_t seed, double reference_cos);

// Maximum of (1/2) lambda_min(K_W + K_W†) over sampled contractions; the
// identity (padded to shape) is always injected, callers may add analytic
// candidates. violation = best_value - reference_cos.
OracleReport random_w_max(const KrausChannel& channel1, const KrausChannel& channel2,
                          std::size_t samples, std::uint64_t seed, double reference_cos,
                          const std::vector<ComplexMatrix>& injected = {});

// violation = |F_B(state, extended output) - expected_cos|.
OracleReport certify_saturation(const PureState& state, const KrausChannel& channel,
                                double expected_cos);

}  // namespace qsl
