#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qsl/states.hpp"
#include "test_support.hpp"

using namespace qsl;

namespace {

DensityMatrix basis_state(std::size_t dim, std::size_t k) {
    ComplexMatrix m(dim, dim);
    m(k, k) = 1.0;
    return DensityMatrix(m);
}

}  // namespace

TEST_CASE("density matrix validation") {
    CHECK_THROWS_AS(DensityMatrix(ComplexMatrix::identity(2)), std::invalid_argument);  // trace 2
    auto neg = ComplexMatrix::zeros(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS((DensityMatrix(neg)), std::invalid_argument);
}

TEST_CASE("fidelity fixed values") {
    SUBCASE("F(rho, rho) = 1") {
        const DensityMatrix rho = test::random_density(3, 3);
        CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("orthogonal pure states have fidelity 0") {
        CHECK(fidelity(basis_state(2, 0), basis_state(2, 1)) == doctest::Approx(0.0));
    }
    SUBCASE("maximally mixed vs |0><0| gives 1/sqrt(2)") {
        const DensityMatrix mixed(cplx(0.5, 0.0) * ComplexMatrix::identity(2));
        CHECK(fidelity(mixed, basis_state(2, 0)) ==
              doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
    }
    SUBCASE("pure-state shortcut equals sqrt(<psi|sigma|psi>)") {
        const DensityMatrix sigma = test::random_density(3, 5);
        const PureState psi = haar_state(3, 5, 0);
        cplx acc = 0.0;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                acc += std::conj(psi.amplitudes()[i]) * sigma.matrix()(i, j) * psi.amplitudes()[j];
        CHECK(fidelity(psi.density(), sigma) ==
              doctest::Approx(std::sqrt(std::real(acc))).epsilon(1e-10));
    }
}

TEST_CASE("fidelity symmetry and unitary invariance") {
    for (std::uint64_t seed : {11, 12, 13}) {
        const DensityMatrix a = test::random_density(3, seed);
        const DensityMatrix b = test::random_density(3, seed + 100);
        CHECK(fidelity(a, b) == doctest::Approx(fidelity(b, a)).epsilon(1e-10));

        const ComplexMatrix u = test::random_unitary(3, seed + 200);
        const DensityMatrix ua(hermitize(u * a.matrix() * adjoint(u)));
        const DensityMatrix ub(hermitize(u * b.matrix() * adjoint(u)));
        CHECK(fidelity(ua, ub) == doctest::Approx(fidelity(a, b)).epsilon(1e-10));
    }
}

TEST_CASE("bures angle") {
    const DensityMatrix rho = test::random_density(2, 21);
    CHECK(bures_angle(rho, rho) == doctest::Approx(0.0).epsilon(1e-7));
    CHECK(bures_angle(basis_state(2, 0), basis_state(2, 1)) ==
          doctest::Approx(std::acos(0.0)));
}

TEST_CASE("purification") {
    SUBCASE("pure state keeps a trivial ancilla") {
        const PureState psi = haar_state(3, 31, 0);
        const Purification p = purify(psi.density());
        CHECK(p.ancilla_dim == 1);
        // Equal up to global phase: |<psi|phi>| = 1.
        cplx ov = 0.0;
        for (std::size_t i = 0; i < 3; ++i)
            ov += std::conj(psi.amplitudes()[i]) * p.state.amplitudes()[i];
        CHECK(std::abs(ov) == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("maximally mixed qubit purifies to a Bell-type state") {
        const DensityMatrix mixed(cplx(0.5, 0.0) * ComplexMatrix::identity(2));
        const Purification p = purify(mixed);
        CHECK(p.ancilla_dim == 2);
        CHECK(entanglement_entropy(p.state, {0}, {2, 2}) == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("partial trace round trip on random mixed states") {
        for (std::uint64_t seed : {41, 42, 43}) {
            const DensityMatrix rho = test::random_density(2, seed);
            const Purification p = purify(rho);
            const ComplexMatrix back =
                partial_trace(p.state.density().matrix(), {2, p.ancilla_dim}, {0});
            CHECK(max_abs_diff(back, rho.matrix()) <= 1e-9);
        }
    }
}

TEST_CASE("ghz and separable plus states") {
    const PureState g1 = ghz(1);
    const PureState s1 = separable_plus(1);
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(std::abs(g1.amplitudes()[i] - s1.amplitudes()[i]) <= 1e-15);

    const PureState g2 = ghz(2);
    CHECK(std::abs(g2.amplitudes()[0] - cplx(1.0 / std::sqrt(2.0), 0.0)) <= 1e-15);
    CHECK(std::abs(g2.amplitudes()[1]) == 0.0);
    CHECK(std::abs(g2.amplitudes()[2]) == 0.0);
    CHECK(std::abs(g2.amplitudes()[3] - cplx(1.0 / std::sqrt(2.0), 0.0)) <= 1e-15);

    const PureState s2 = separable_plus(2);
    for (const auto& a : s2.amplitudes()) CHECK(std::abs(a - cplx(0.5, 0.0)) <= 1e-15);

    CHECK_THROWS_AS(ghz(7), std::invalid_argument);
    CHECK_THROWS_AS(separable_plus(0), std::invalid_argument);
}

TEST_CASE("entanglement entropy") {
    SUBCASE("product state has zero entanglement") {
        const PureState psi = separable_plus(3);
        CHECK(entanglement_entropy(psi, {0}, {2, 2, 2}) == doctest::Approx(0.0).epsilon(1e-10));
    }
    SUBCASE("bell state across the qubit cut is maximal") {
        CHECK(entanglement_entropy(ghz(2), {0}, {2, 2}) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("(|00> + |01> + |10>)/sqrt(3)") {
        // reduced eigenvalues (3 +- sqrt(5))/6, entropy ~ 0.550048 bits
        const double s3 = 1.0 / std::sqrt(3.0);
        const PureState psi({cplx(s3, 0.0), cplx(s3, 0.0), cplx(s3, 0.0), cplx(0.0, 0.0)});
        const double lp = (3.0 + std::sqrt(5.0)) / 6.0;
        const double lm = (3.0 - std::sqrt(5.0)) / 6.0;
        const double expected = -(lp * std::log2(lp) + lm * std::log2(lm));
        CHECK(expected == doctest::Approx(0.5500).epsilon(2e-4));
        CHECK(entanglement_entropy(psi, {0}, {2, 2}) == doctest::Approx(expected).epsilon(1e-10));
    }
    SUBCASE("invariant under local unitaries") {
        const PureState psi = haar_state(4, 51, 0);
        const ComplexMatrix u = kron(test::random_unitary(2, 52), ComplexMatrix::identity(2));
        std::vector<cplx> rotated(4, 0.0);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) rotated[i] += u(i, j) * psi.amplitudes()[j];
        const PureState psi2(rotated);
        CHECK(entanglement_entropy(psi2, {0}, {2, 2}) ==
              doctest::Approx(entanglement_entropy(psi, {0}, {2, 2})).epsilon(1e-10));
    }
    SUBCASE("dimension mismatch throws") {
        CHECK_THROWS_AS(entanglement_entropy(ghz(2), {0}, {2, 3}), std::invalid_argument);
    }
}
