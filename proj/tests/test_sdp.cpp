#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "qsl/channels.hpp"
#include "qsl/sdp.hpp"
#include "test_support.hpp"

using namespace qsl;

namespace {
constexpr double kPi = 3.14159265358979323846;

double half_lambda_min(const ComplexMatrix& kw) {
    return 0.5 * eig_hermitian(HermitianMatrix(hermitize(kw + adjoint(kw)))).eigenvalues.front();
}
}  // namespace

TEST_CASE("build_kw") {
    const auto id = pad_identity_kraus(2, 2);
    const auto ch = dephasing(DecayProfile::constant(0.1), 1.0, kPi / 2.0);

    SUBCASE("W = 0 gives K_W = 0") {
        CHECK(max_abs(build_kw(id.kraus(), ch.kraus(), ComplexMatrix::zeros(2, 2))) == 0.0);
    }
    SUBCASE("identity channels with W = [1]") {
        std::vector<ComplexMatrix> one{ComplexMatrix::identity(2)};
        ComplexMatrix w(1, 1);
        w(0, 0) = 1.0;
        const auto kw = build_kw(one, one, w);
        CHECK(max_abs_diff(kw, ComplexMatrix::identity(2)) == 0.0);
        CHECK(half_lambda_min(kw) == doctest::Approx(1.0));
    }
    SUBCASE("appendix W for dephasing at omega t = pi/2 gives sqrt(1/2)") {
        const double p = std::exp(-0.1 * kPi / 2.0);
        const double den = std::sqrt(1.0 + p * std::cos(kPi / 2.0));  // = 1
        ComplexMatrix w(2, 2);
        w(0, 0) = std::sqrt(1.0 + p) * std::cos(kPi / 4.0) / den;
        w(0, 1) = cplx(0.0, std::sqrt(1.0 - p) * std::sin(kPi / 4.0) / den);
        const auto kw = build_kw(id.kraus(), ch.kraus(), w);
        CHECK(half_lambda_min(kw) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    }
    SUBCASE("linear in W by superposition") {
        const auto w1 = test::random_matrix(2, 2, 7);
        const auto w2 = test::random_matrix(2, 2, 8);
        const auto both = build_kw(id.kraus(), ch.kraus(), w1 + w2);
        const auto split =
            build_kw(id.kraus(), ch.kraus(), w1) + build_kw(id.kraus(), ch.kraus(), w2);
        CHECK(max_abs_diff(both, split) <= 1e-14);
    }
    SUBCASE("shape mismatch throws") {
        CHECK_THROWS_AS(build_kw(id.kraus(), ch.kraus(), ComplexMatrix::zeros(3, 2)),
                        std::invalid_argument);
    }
}

TEST_CASE("contraction matrix validates its norm") {
    CHECK_NOTHROW(ContractionMatrix(ComplexMatrix::identity(2)));
    auto w = ComplexMatrix::identity(2);
    w(0, 0) = 1.5;
    CHECK_THROWS_AS((ContractionMatrix(w)), std::invalid_argument);
}

TEST_CASE("solve_primal on the three reference cases") {
    SUBCASE("identity vs identity") {
        std::vector<ComplexMatrix> one{ComplexMatrix::identity(2)};
        const auto s = solve_primal(one, one);
        REQUIRE(s.converged);
        CHECK(s.primal_value == doctest::Approx(1.0).epsilon(1e-7));
        CHECK(std::abs(s.w_opt(0, 0) - cplx(1.0, 0.0)) <= 1e-4);
    }
    SUBCASE("identity vs amplitude damping at gamma=1, t=ln4") {
        const auto ch = amplitude_damping(DecayProfile::constant(1.0), std::log(4.0));
        const auto id = pad_identity_kraus(2, 2);
        const auto s = solve_primal(id.kraus(), ch.kraus());
        REQUIRE(s.converged);
        CHECK(std::abs(s.primal_value - 0.5) <= 1e-7);
    }
    SUBCASE("identity vs dephasing at gamma=0.1, omega=1, t=pi") {
        const auto ch = dephasing(DecayProfile::constant(0.1), 1.0, kPi);
        const auto id = pad_identity_kraus(2, 2);
        const auto s = solve_primal(id.kraus(), ch.kraus());
        REQUIRE(s.converged);
        CHECK(std::abs(s.primal_value - 0.3671494) <= 1e-6);
    }
}

TEST_CASE("solve_dual certificates") {
    SUBCASE("identity vs identity has dual value 1") {
        std::vector<ComplexMatrix> one{ComplexMatrix::identity(2)};
        const auto s = solve_dual(one, one);
        REQUIRE(s.converged);
        CHECK(s.dual_value == doctest::Approx(1.0).epsilon(1e-7));
    }
    SUBCASE("dephasing: |+><+| attains the Eq.-style trace-norm value") {
        const double t = 1.3, omega = 1.0, gamma = 0.1;
        const auto ch = dephasing(DecayProfile::constant(gamma), omega, t);
        const auto id = pad_identity_kraus(2, 2);
        ComplexMatrix plus(2, 2);
        plus(0, 0) = plus(0, 1) = plus(1, 0) = plus(1, 1) = 0.5;
        ComplexMatrix m(2, 2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                m(i, j) = trace(plus * adjoint(id.kraus()[i]) * ch.kraus()[j]);
        const double p = std::exp(-gamma * t);
        const double expected = std::sqrt((1.0 + p * std::cos(omega * t)) / 2.0);
        CHECK(trace_norm(m) == doctest::Approx(expected).epsilon(1e-10));
        // and the solver's dual value agrees
        const auto s = solve_dual(id.kraus(), ch.kraus());
        REQUIRE(s.converged);
        CHECK(std::abs(s.dual_value - expected) <= 1e-6);
    }
    SUBCASE("identity vs amplitude damping dual value 0.5") {
        const auto ch = amplitude_damping(DecayProfile::constant(1.0), std::log(4.0));
        const auto id = pad_identity_kraus(2, 2);
        const auto s = solve_dual(id.kraus(), ch.kraus());
        REQUIRE(s.converged);
        CHECK(std::abs(s.dual_value - 0.5) <= 1e-6);
    }
}

TEST_CASE("solution invariants on a mixed corpus") {
    std::vector<std::pair<std::vector<ComplexMatrix>, std::vector<ComplexMatrix>>> corpus;
    {
        const auto id = pad_identity_kraus(2, 2);
        corpus.push_back({id.kraus(),
                          amplitude_damping(DecayProfile::constant(1.0), 0.8).kraus()});
        corpus.push_back({id.kraus(), dephasing(DecayProfile::constant(0.1), 1.0, 2.2).kraus()});
        const auto c1 = test::random_channel(2, 3, 5);
        const auto c2 = test::random_channel(2, 3, 6);
        corpus.push_back({c1.kraus(), c2.kraus()});
    }
    for (const auto& [k1, k2] : corpus) {
        const auto s = solve_primal(k1, k2);
        REQUIRE(s.converged);
        CHECK(s.gap <= 1e-8);
        CHECK(s.max_residual() <= 1e-8);

        // W feasible, and its K_W value matches the reported optimum.
        CHECK(operator_norm(s.w_opt) <= 1.0 + 1e-8);
        const auto kw = build_kw(k1, k2, s.w_opt);
        CHECK(std::abs(half_lambda_min(kw) - s.primal_value) <= 1e-7);

        // rho is a state and its M matrix reproduces the dual value.
        CHECK(std::abs(trace(s.rho_opt) - cplx(1.0, 0.0)) <= 1e-9);
        const auto egr = eig_hermitian(HermitianMatrix(s.rho_opt));
        CHECK(egr.eigenvalues.front() >= -1e-9);
        ComplexMatrix m(k1.size(), k2.size());
        for (std::size_t i = 0; i < k1.size(); ++i)
            for (std::size_t j = 0; j < k2.size(); ++j)
                m(i, j) = trace(s.rho_opt * adjoint(k1[i]) * k2[j]);
        CHECK(std::abs(trace_norm(m) - s.dual_value) <= 1e-7);

        // Weak duality along the whole path.
        for (const auto& row : s.objective_trace) CHECK(row[1] >= row[0] - 1e-12);
    }
}

TEST_CASE("nuclear norm SDP cross-checks trace_norm") {
    for (std::uint64_t seed : {11, 12}) {
        const ComplexMatrix m = test::random_matrix(3, 3, seed);
        const auto s = nuclear_norm_sdp(m);
        REQUIRE(s.converged);
        const double tn = trace_norm(m);
        CHECK(std::abs(s.primal_value - tn) <= 1e-7 * std::max(1.0, tn));
        CHECK(std::abs(s.dual_value - tn) <= 1e-7 * std::max(1.0, tn));
    }
}

TEST_CASE("solver is deterministic bit for bit") {
    const auto ch = dephasing(DecayProfile::constant(0.1), 1.0, 1.7);
    const auto id = pad_identity_kraus(2, 2);
    const auto s1 = solve_primal(id.kraus(), ch.kraus());
    const auto s2 = solve_primal(id.kraus(), ch.kraus());
    CHECK(std::memcmp(&s1.primal_value, &s2.primal_value, sizeof(double)) == 0);
    CHECK(std::memcmp(&s1.dual_value, &s2.dual_value, sizeof(double)) == 0);
    REQUIRE(s1.w_opt.data().size() == s2.w_opt.data().size());
    CHECK(std::memcmp(s1.w_opt.data().data(), s2.w_opt.data().data(),
                      s1.w_opt.data().size() * sizeof(cplx)) == 0);
    CHECK(std::memcmp(s1.rho_opt.data().data(), s2.rho_opt.data().data(),
                      s1.rho_opt.data().size() * sizeof(cplx)) == 0);
}

TEST_CASE("iteration cap reports honest non-convergence") {
    const auto ch = dephasing(DecayProfile::constant(0.1), 1.0, 1.0);
    const auto id = pad_identity_kraus(2, 2);
    SdpOptions opt;
    opt.max_iter = 1;
    const auto s = solve_primal(id.kraus(), ch.kraus(), opt);
    CHECK_FALSE(s.converged);
    CHECK(s.iterations <= 1);
}
