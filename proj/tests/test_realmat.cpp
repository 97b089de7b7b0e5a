#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qsl/realmat.hpp"
#include "test_support.hpp"

using namespace qsl;

TEST_CASE("realify of a real symmetric matrix is block diagonal {A, A}") {
    const auto a = ComplexMatrix::from_rows({{2.0, 1.0}, {1.0, 3.0}});
    const RealMatrix r = realify(a);
    REQUIRE(r.rows() == 4);
    CHECK(r(0, 0) == 2.0);
    CHECK(r(0, 1) == 1.0);
    CHECK(r(2, 2) == 2.0);
    CHECK(r(3, 2) == 1.0);
    CHECK(r(0, 2) == 0.0);
    CHECK(r(1, 3) == 0.0);
}

TEST_CASE("realify doubles eigenvalue multiplicities") {
    // [[0, -i],[i, 0]] has eigenvalues {-1, 1}; the embedding has {-1,-1,1,1}.
    auto a = ComplexMatrix::zeros(2, 2);
    a(0, 1) = cplx(0.0, -1.0);
    a(1, 0) = cplx(0.0, 1.0);
    const RealEig eg = sym_eig(realify(a));
    CHECK(eg.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(eg.eigenvalues[1] == doctest::Approx(-1.0));
    CHECK(eg.eigenvalues[2] == doctest::Approx(1.0));
    CHECK(eg.eigenvalues[3] == doctest::Approx(1.0));
}

TEST_CASE("realify of zero is zero; round trip through derealify") {
    CHECK(rmax_abs(realify(ComplexMatrix::zeros(3, 3))) == 0.0);
    const ComplexMatrix m = test::random_matrix(4, 4, 5);
    CHECK(max_abs_diff(derealify(realify(m)), m) == 0.0);
}

TEST_CASE("realified eigenvalues match the complex ones, doubled") {
    const HermitianMatrix a = test::random_hermitian(5, 17);
    const auto ce = eig_hermitian(a).eigenvalues;
    const auto re = sym_eig(realify(a.matrix())).eigenvalues;
    REQUIRE(re.size() == 2 * ce.size());
    for (std::size_t i = 0; i < ce.size(); ++i) {
        CHECK(re[2 * i] == doctest::Approx(ce[i]).epsilon(1e-10));
        CHECK(re[2 * i + 1] == doctest::Approx(ce[i]).epsilon(1e-10));
    }
}

TEST_CASE("PSD preserved both ways under realification") {
    const ComplexMatrix g = test::random_matrix(4, 4, 23);
    const ComplexMatrix psd = hermitize(g * adjoint(g));
    CHECK(sym_eig(realify(psd)).eigenvalues.front() >= -1e-10);
}

TEST_CASE("cholesky factorization and triangular solve") {
    const ComplexMatrix g = test::random_matrix(6, 6, 29);
    RealMatrix a = realify(hermitize(g * adjoint(g)));
    for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) += 0.1;

    RealMatrix lower;
    REQUIRE(cholesky(a, lower));
    CHECK(rmax_abs(lower * rtranspose(lower) - a) <= 1e-10 * rmax_abs(a));

    RealMatrix rhs = RealMatrix::identity(a.rows());
    tri_solve_lower(lower, rhs);  // rhs = L^{-1}
    CHECK(rmax_abs(lower * rhs - RealMatrix::identity(a.rows())) <= 1e-10);
}

TEST_CASE("cholesky reports indefinite input") {
    RealMatrix a = RealMatrix::identity(2);
    a(1, 1) = -1.0;
    RealMatrix lower;
    CHECK_FALSE(cholesky(a, lower));
}

TEST_CASE("real symmetric eigensolver matches hand values") {
    RealMatrix a(2, 2);
    a(0, 0) = 2.0;
    a(0, 1) = 1.0;
    a(1, 0) = 1.0;
    a(1, 1) = 2.0;
    const RealEig eg = sym_eig(a);
    CHECK(eg.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(eg.eigenvalues[1] == doctest::Approx(3.0));
}
