// Shared fixtures: seeded random matrices, states and channels.
#pragma once

#include <cmath>
#include <vector>

#include "qsl/channels.hpp"
#include "qsl/linalg.hpp"
#include "qsl/oracle.hpp"
#include "qsl/states.hpp"

namespace qsl::test {

inline ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    SampleStream s(seed, 0);
    ComplexMatrix m(rows, cols);
    for (auto& v : m.data()) v = cplx(s.gaussian(), s.gaussian());
    return m;
}

inline HermitianMatrix random_hermitian(std::size_t n, std::uint64_t seed) {
    return HermitianMatrix(hermitize(random_matrix(n, n, seed)));
}

inline ComplexMatrix random_unitary(std::size_t n, std::uint64_t seed) {
    return eig_hermitian(random_hermitian(n, seed)).eigenvectors;
}

inline DensityMatrix random_density(std::size_t n, std::uint64_t seed) {
    const ComplexMatrix g = random_matrix(n, n, seed);
    ComplexMatrix rho = g * adjoint(g);
    rho *= cplx(1.0 / std::real(trace(rho)), 0.0);
    return DensityMatrix(hermitize(rho));
}

// Random CPTP channel with d Kraus operators on dimension n: Ginibre blocks
// normalized through the inverse square root of their completeness sum.
inline KrausChannel random_channel(std::size_t n, std::size_t d, std::uint64_t seed) {
    std::vector<ComplexMatrix> raw;
    for (std::size_t i = 0; i < d; ++i) raw.push_back(random_matrix(n, n, seed * 977 + i + 1));
    ComplexMatrix total(n, n);
    for (const auto& g : raw) total += adjoint(g) * g;
    const EigResult eg = eig_hermitian(HermitianMatrix(hermitize(total)));
    ComplexMatrix inv_sqrt(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double f = 1.0 / std::sqrt(eg.eigenvalues[k]);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                inv_sqrt(i, j) += f * eg.eigenvectors(i, k) * std::conj(eg.eigenvectors(j, k));
    }
    std::vector<ComplexMatrix> ops;
    for (const auto& g : raw) ops.push_back(g * inv_sqrt);
    return KrausChannel(std::move(ops), "random");
}

}  // namespace qsl::test
