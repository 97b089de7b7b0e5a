// Benchmark of the OpenMP kernels against their serial references:
// dense complex matmul, oracle sampling, and a large SDP solve.
// Results must agree bitwise; the table reports wall-clock speedups
// (best of three runs after a warmup).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qsl/channels.hpp"
#include "qsl/oracle.hpp"
#include "qsl/qsl.hpp"

using namespace qsl;

namespace {

double now() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

double time_best(const std::function<void()>& fn, int reps = 3) {
    fn();  // warmup
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const double t0 = now();
        fn();
        best = std::min(best, now() - t0);
    }
    return best;
}

ComplexMatrix random_matrix(std::size_t n, std::uint64_t seed) {
    SampleStream s(seed, 0);
    ComplexMatrix m(n, n);
    for (auto& v : m.data()) v = cplx(s.gaussian(), s.gaussian());
    return m;
}

void set_threads(int t) {
#ifdef _OPENMP
    omp_set_num_threads(t);
#else
    (void)t;
#endif
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void report(const char* name, double t_ser, double t_par, double diff) {
    std::printf("%-28s %12.4f %12.4f %8.2fx %10.3e\n", name, t_ser, t_par, t_ser / t_par, diff);
}

}  // namespace

int main() {
    std::printf("threads available: %d\n\n", max_threads());
    std::printf("%-28s %12s %12s %9s %10s\n", "kernel", "serial [s]", "parallel [s]", "speedup",
                "max |diff|");

    // Dense complex matmul: reference loop vs OpenMP path.
    for (std::size_t n : {64, 128, 256}) {
        const ComplexMatrix a = random_matrix(n, 1);
        const ComplexMatrix b = random_matrix(n, 2);
        ComplexMatrix r_ref, r_par;
        const double t_ser = time_best([&] { r_ref = matmul_reference(a, b); });
        set_threads(max_threads());
        const double t_par = time_best([&] { r_par = a * b; });
        char name[64];
        std::snprintf(name, sizeof(name), "matmul %zux%zu", n, n);
        report(name, t_ser, t_par, max_abs_diff(r_ref, r_par));
    }

    // Oracle sampling: one thread vs all threads, identical reports expected.
    {
        const auto ch = tensor_power(dephasing(DecayProfile::constant(0.1), 1.0, 1.0), 3);
        const std::size_t samples = 20000;
        OracleReport rep1, repn;
        set_threads(1);
        const double t_ser =
            time_best([&] { rep1 = random_state_min_fidelity(ch, ch.dim(), samples, 7, 1.0); });
        set_threads(max_threads());
        const double t_par =
            time_best([&] { repn = random_state_min_fidelity(ch, ch.dim(), samples, 7, 1.0); });
        report("oracle min-fidelity 20k/64d", t_ser, t_par,
               std::abs(rep1.best_value - repn.best_value));
    }

    // One large SDP solve (dephasing^4 vs identity): the Schur assembly and
    // scaled-constraint kernels parallelize inside the solver.
    {
        const auto ch = tensor_power(dephasing(DecayProfile::constant(0.1), 1.0, 1.2), 4);
        const auto id = pad_identity_kraus(16, 16);
        SdpSolution s1, sn;
        set_threads(1);
        const double t_ser = time_best([&] { s1 = solve_primal(id.kraus(), ch.kraus()); }, 2);
        set_threads(max_threads());
        const double t_par = time_best([&] { sn = solve_primal(id.kraus(), ch.kraus()); }, 2);
        report("sdp solve N=4 (m=513)", t_ser, t_par, std::abs(s1.primal_value - sn.primal_value));
    }

    return 0;
}
