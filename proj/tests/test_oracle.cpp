#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cmath>
#include <cstring>

#include "qsl/oracle.hpp"
#include "qsl/qsl.hpp"
#include "test_support.hpp"

using namespace qsl;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("haar states are unit norm and reproducible") {
    const PureState a = haar_state(6, 42, 3);
    const PureState b = haar_state(6, 42, 3);
    double n2 = 0.0;
    for (const auto& v : a.amplitudes()) n2 += std::norm(v);
    CHECK(std::abs(n2 - 1.0) <= 1e-14);
    CHECK(std::memcmp(a.amplitudes().data(), b.amplitudes().data(),
                      a.amplitudes().size() * sizeof(cplx)) == 0);
    // different samples differ
    const PureState c = haar_state(6, 42, 4);
    CHECK(std::abs(a.amplitudes()[0] - c.amplitudes()[0]) > 0.0);
}

TEST_CASE("min fidelity oracle on the identity channel") {
    const auto id = pad_identity_kraus(2, 2);
    const auto rep = random_state_min_fidelity(id, 2, 200, 7, 1.0);
    CHECK(rep.best_value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.violation <= 1e-12);
}

TEST_CASE("min fidelity oracle brackets the dephasing closed form") {
    const auto profile = DecayProfile::constant(0.1);
    const auto ch = dephasing(profile, 1.0, kPi);
    const double cosd = closed_form_dephasing(profile, 1.0, kPi).cos_d;
    const auto rep = random_state_min_fidelity(ch, 2, 10000, 20260808, cosd);
    CHECK(rep.best_value >= cosd - 1e-6);   // sampling only overestimates
    CHECK(rep.best_value <= cosd + 5e-3);   // and comes close on this landscape
}

TEST_CASE("min fidelity oracle brackets the amplitude-damping closed form") {
    const auto ch = amplitude_damping(DecayProfile::constant(1.0), std::log(4.0));
    const auto rep = random_state_min_fidelity(ch, 2, 10000, 20260808, 0.5);
    CHECK(rep.best_value >= 0.5 - 1e-6);
    CHECK(rep.best_value <= 0.5 + 5e-3);
}

TEST_CASE("contraction oracle") {
    SUBCASE("identity vs identity attains 1 through the injected W = I") {
        const auto id = pad_identity_kraus(2, 2);
        const auto rep = random_w_max(id, id, 100, 5, 1.0);
        CHECK(rep.best_value == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(rep.violation <= 1e-12);
    }
    SUBCASE("injected analytic W reproduces the dephasing value exactly") {
        const auto profile = DecayProfile::constant(0.1);
        const double t = 2.1;
        const auto r = closed_form_dephasing(profile, 1.0, t);
        const auto ch = dephasing(profile, 1.0, t);
        const auto id = pad_identity_kraus(2, 2);
        const auto rep = random_w_max(id, ch, 50, 5, r.cos_d, {r.w_opt->matrix()});
        CHECK(rep.best_value == doctest::Approx(r.cos_d).epsilon(1e-10));
        CHECK(rep.violation <= 1e-10);
    }
    SUBCASE("random contractions undershoot the amplitude-damping optimum") {
        const auto ch = amplitude_damping(DecayProfile::constant(1.0), std::log(4.0));
        const auto id = pad_identity_kraus(2, 2);
        const auto rep = random_w_max(id, ch, 1000, 11, 0.5);
        CHECK(rep.best_value <= 0.5 + 1e-12);
    }
}

TEST_CASE("certify saturation") {
    SUBCASE("|+> under dephasing") {
        const auto profile = DecayProfile::constant(0.1);
        const double t = 1.4;
        const auto ch = dephasing(profile, 1.0, t);
        const double cosd = closed_form_dephasing(profile, 1.0, t).cos_d;
        const auto rep = certify_saturation(separable_plus(1), ch, cosd);
        CHECK(rep.violation <= 1e-8);
    }
    SUBCASE("unitary eigen-superposition") {
        const HermitianMatrix h = test::random_hermitian(3, 13);
        const double t = 0.6;
        const auto r = unitary_distance(h, t);
        REQUIRE(r.optimal_input);
        const auto ch = unitary_channel(h, t);
        const auto rep = certify_saturation(r.optimal_input->state, ch, r.cos_d);
        CHECK(rep.violation <= 1e-8);
    }
    SUBCASE("dual purification for a random channel") {
        const auto ch = test::random_channel(2, 4, 99);
        const auto id = pad_identity_kraus(2, ch.kraus_count());
        const auto sol = solve_dual(id.kraus(), ch.kraus());
        REQUIRE(sol.converged);
        const auto pur = purify(DensityMatrix(sol.rho_opt));
        const auto rep = certify_saturation(pur.state, ch, sol.primal_value);
        CHECK(rep.violation <= 1e-5);
    }
}

TEST_CASE("reports are reproducible and prefix-monotone") {
    const auto ch = dephasing(DecayProfile::constant(0.1), 1.0, 2.0);
    const auto a = random_state_min_fidelity(ch, 2, 500, 77, 1.0);
    const auto b = random_state_min_fidelity(ch, 2, 500, 77, 1.0);
    CHECK(std::memcmp(&a.best_value, &b.best_value, sizeof(double)) == 0);

    // Doubling samples can only lower the minimum (prefix sampling).
    const auto big = random_state_min_fidelity(ch, 2, 1000, 77, 1.0);
    CHECK(big.best_value <= a.best_value + 1e-12);

    // Different seeds explore different states.
    const auto c = random_state_min_fidelity(ch, 2, 500, 78, 1.0);
    CHECK(std::abs(c.best_value - a.best_value) > 0.0);
}

#ifdef _OPENMP
TEST_CASE("reports do not depend on the thread count") {
    const auto ch = tensor_power(dephasing(DecayProfile::constant(0.1), 1.0, 1.0), 2);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto one = random_state_min_fidelity(ch, 4, 2000, 3, 1.0);
    omp_set_num_threads(saved);
    const auto many = random_state_min_fidelity(ch, 4, 2000, 3, 1.0);
    CHECK(std::memcmp(&one.best_value, &many.best_value, sizeof(double)) == 0);

    const auto id = pad_identity_kraus(4, 4);
    omp_set_num_threads(1);
    const auto w1 = random_w_max(id, ch, 200, 3, 1.0);
    omp_set_num_threads(saved);
    const auto wn = random_w_max(id, ch, 200, 3, 1.0);
    CHECK(std::memcmp(&w1.best_value, &wn.best_value, sizeof(double)) == 0);
}
#endif

TEST_CASE("pairwise oracle pinches the distance of two arbitrary channels") {
    const auto c1 = test::random_channel(2, 3, 55);
    const auto c2 = test::random_channel(2, 3, 56);
    const auto r = channel_distance(c1, c2);
    REQUIRE(r.converged);

    const auto fid = random_state_min_fidelity_pair(c1, c2, 2, 1500, 17, r.cos_d);
    CHECK(fid.best_value >= r.cos_d - 1e-6);

    const std::size_t d = std::max(c1.kraus_count(), c2.kraus_count());
    const auto p1 = pad_with_zeros(c1, d);
    const auto p2 = pad_with_zeros(c2, d);
    std::vector<ComplexMatrix> injected{r.w_opt->matrix()};
    const auto wmax = random_w_max(p1, p2, 400, 17, r.cos_d, injected);
    CHECK(wmax.best_value <= r.cos_d + 1e-6);
    // the injected optimal W makes the lower side tight
    CHECK(wmax.best_value >= r.cos_d - 1e-7);
}

TEST_CASE("pinching the exact value between the two oracles") {
    const auto profile = DecayProfile::constant(0.1);
    const double t = 2.6;
    const auto ch = dephasing(profile, 1.0, t);
    const auto id = pad_identity_kraus(2, 2);
    const auto r = channel_distance(pad_identity_kraus(2, 1), ch);
    REQUIRE(r.converged);

    const auto lo = random_w_max(id, ch, 500, 9, r.cos_d);
    const auto hi = random_state_min_fidelity(ch, 2, 5000, 9, r.cos_d);
    CHECK(lo.best_value <= r.cos_d + 1e-6);
    CHECK(hi.best_value >= r.cos_d - 1e-6);
}
