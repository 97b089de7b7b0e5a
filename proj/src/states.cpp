#include "qsl/states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qsl {

namespace {

constexpr double kHermTol = 1e-10;
constexpr double kTraceTol = 1e-10;
constexpr double kPsdTol = 1e-9;

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

}  // namespace

DensityMatrix::DensityMatrix(const ComplexMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("DensityMatrix: matrix not square");
    if (!all_finite(m)) throw std::invalid_argument("DensityMatrix: non-finite entries");
    if (!is_hermitian(m, kHermTol)) throw std::invalid_argument("DensityMatrix: not Hermitian");
    if (std::abs(trace(m) - cplx(1.0, 0.0)) > kTraceTol)
        throw std::invalid_argument("DensityMatrix: trace not 1");
    m_ = hermitize(m);
    const auto eg = eig_hermitian(HermitianMatrix(m_));
    if (eg.eigenvalues.front() < -kPsdTol)
        throw std::invalid_argument("DensityMatrix: negative eigenvalue beyond tolerance");
}

PureState::PureState(std::vector<cplx> amplitudes) : amp_(std::move(amplitudes)) {
    if (amp_.empty()) throw std::invalid_argument("PureState: empty amplitude vector");
    double n2 = 0.0;
    for (const auto& a : amp_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw std::invalid_argument("PureState: non-finite amplitude");
        n2 += std::norm(a);
    }
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-12)
        throw std::invalid_argument("PureState: not unit norm");
}

DensityMatrix PureState::density() const {
    const std::size_t n = amp_.size();
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = amp_[i] * std::conj(amp_[j]);
    return DensityMatrix(m);
}

double fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2) {
    if (rho1.dim() != rho2.dim()) throw std::invalid_argument("fidelity: dimension mismatch");

    // Shortcut when either argument is (numerically) pure: F = sqrt(<psi|sigma|psi>).
    auto purity = [](const DensityMatrix& r) {
        return std::real(trace(r.matrix() * r.matrix()));
    };
    auto pure_shortcut = [](const DensityMatrix& pure, const DensityMatrix& other) {
        const auto eg = eig_hermitian(HermitianMatrix(pure.matrix()));
        const std::size_t n = pure.dim();
        const std::size_t top = n - 1;
        cplx acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cplx row = 0.0;
            for (std::size_t j = 0; j < n; ++j) row += other.matrix()(i, j) * eg.eigenvectors(j, top);
            acc += std::conj(eg.eigenvectors(i, top)) * row;
        }
        return std::sqrt(clamp01(std::real(acc)));
    };
    if (purity(rho1) > 1.0 - 1e-10) return pure_shortcut(rho1, rho2);
    if (purity(rho2) > 1.0 - 1e-10) return pure_shortcut(rho2, rho1);

    const HermitianMatrix s1 = matrix_sqrt_psd(HermitianMatrix(rho1.matrix()));
    const ComplexMatrix inner = s1.matrix() * rho2.matrix() * s1.matrix();
    const auto eg = eig_hermitian(HermitianMatrix(hermitize(inner)));
    double f = 0.0;
    for (double l : eg.eigenvalues)
        if (l > 0.0) f += std::sqrt(l);
    return clamp01(f);
}

double bures_angle(const DensityMatrix& rho1, const DensityMatrix& rho2) {
    return std::acos(clamp01(fidelity(rho1, rho2)));
}

Purification purify(const DensityMatrix& rho) {
    const std::size_t n = rho.dim();
    const auto eg = eig_hermitian(HermitianMatrix(rho.matrix()));

    // Eigenpairs sorted by descending weight; the rank sets the ancilla size.
    std::vector<std::size_t> order;
    for (std::size_t k = n; k-- > 0;)
        if (eg.eigenvalues[k] > 1e-10) order.push_back(k);
    const std::size_t anc = std::max<std::size_t>(1, order.size());

    std::vector<cplx> amp(n * anc, 0.0);
    double norm2 = 0.0;
    for (std::size_t a = 0; a < order.size(); ++a) {
        const double w = std::sqrt(eg.eigenvalues[order[a]]);
        for (std::size_t i = 0; i < n; ++i) {
            amp[i * anc + a] = w * eg.eigenvectors(i, order[a]);
            norm2 += std::norm(amp[i * anc + a]);
        }
    }
    const double norm = std::sqrt(norm2);
    for (auto& v : amp) v /= norm;
    return Purification{PureState(std::move(amp)), anc};
}

PureState ghz(std::size_t n_qubits) {
    if (n_qubits < 1 || n_qubits > 6) throw std::invalid_argument("ghz: qubit count out of budget");
    const std::size_t dim = std::size_t{1} << n_qubits;
    std::vector<cplx> amp(dim, 0.0);
    amp.front() = 1.0 / std::sqrt(2.0);
    amp.back() = 1.0 / std::sqrt(2.0);
    return PureState(std::move(amp));
}

PureState separable_plus(std::size_t n_qubits) {
    if (n_qubits < 1 || n_qubits > 6)
        throw std::invalid_argument("separable_plus: qubit count out of budget");
    const std::size_t dim = std::size_t{1} << n_qubits;
    std::vector<cplx> amp(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
    return PureState(std::move(amp));
}

double entanglement_entropy(const PureState& psi,
                            const std::vector<std::size_t>& cut,
                            const std::vector<std::size_t>& dims) {
    std::size_t prod = 1;
    for (std::size_t d : dims) prod *= d;
    if (prod != psi.dim())
        throw std::invalid_argument("entanglement_entropy: dims product does not match state");

    const ComplexMatrix rho_full = psi.density().matrix();
    const ComplexMatrix red = partial_trace(rho_full, dims, cut);

    std::size_t dim_a = red.rows();
    const std::size_t dim_b = prod / std::max<std::size_t>(1, dim_a);
    const std::size_t dmin = std::min(dim_a, dim_b);
    if (dmin <= 1) return 0.0;

    const auto eg = eig_hermitian(HermitianMatrix(hermitize(red)));
    double s = 0.0;
    for (double l : eg.eigenvalues)
        if (l > 1e-12) s -= l * std::log2(l);
    return s / std::log2(static_cast<double>(dmin));
}

}  // namespace qsl
