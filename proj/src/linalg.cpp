#include "qsl/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qsl {

HermitianMatrix::HermitianMatrix(const ComplexMatrix& a) {
    if (!a.is_square()) throw std::invalid_argument("HermitianMatrix: matrix not square");
    if (!all_finite(a)) throw std::invalid_argument("HermitianMatrix: non-finite entries");
    if (!is_hermitian(a, kTol))
        throw std::invalid_argument("HermitianMatrix: not Hermitian within tolerance");
    m_ = hermitize(a);
}

EigResult eig_hermitian(const HermitianMatrix& h) {
    const std::size_t n = h.dim();
    ComplexMatrix a = h.matrix();
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double scale = std::max(frobenius_norm(a), 1e-300);
    const double limit = 5e-16 * scale;
    const int max_sweeps = 64;

    for (int sweep = 0; sweep < max_sweeps && n > 1; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
        if (off <= limit) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double absb = std::abs(apq);
                if (absb <= 1e-2 * limit / static_cast<double>(n)) continue;

                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const cplx phase = apq / absb;

                const double tau = (aqq - app) / (2.0 * absb);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx sp = s * phase;        // J(p,q) = s e^{i phi}
                const cplx spc = std::conj(sp);   // s e^{-i phi}

                // A <- J† A J, touching rows/cols p and q only.
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - spc * akq;
                    a(k, q) = sp * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - sp * aqk;
                    a(q, k) = spc * apk + c * aqk;
                }
                a(p, p) = cplx(app - t * absb, 0.0);
                a(q, q) = cplx(aqq + t * absb, 0.0);
                a(p, q) = 0.0;
                a(q, p) = 0.0;

                for (std::size_t k = 0; k < n; ++k) {
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - spc * vkq;
                    v(k, q) = sp * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<double> lam(n);
    for (std::size_t i = 0; i < n; ++i) lam[i] = a(i, i).real();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return lam[i] < lam[j]; });

    EigResult r;
    r.eigenvalues.resize(n);
    r.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        r.eigenvalues[j] = lam[order[j]];
        for (std::size_t i = 0; i < n; ++i) r.eigenvectors(i, j) = v(i, order[j]);
    }
    return r;
}

SvdResult svd(const ComplexMatrix& m) {
    if (!all_finite(m)) throw std::invalid_argument("svd: non-finite entries");
    const std::size_t p = m.rows(), q = m.cols();
    const std::size_t r = std::min(p, q);

    // Eigendecompose M†M, then recover U by polar reconstruction u_i = M v_i / ||M v_i||.
    const EigResult eg = eig_hermitian(HermitianMatrix(adjoint(m) * m));

    SvdResult out;
    out.singular_values.assign(r, 0.0);
    out.right = ComplexMatrix(q, q);
    for (std::size_t j = 0; j < q; ++j) {
        const std::size_t src = q - 1 - j;  // descending
        for (std::size_t i = 0; i < q; ++i) out.right(i, j) = eg.eigenvectors(i, src);
    }

    std::vector<std::vector<cplx>> ucols;
    ucols.reserve(p);
    std::vector<double> sraw(r, 0.0);
    for (std::size_t j = 0; j < r; ++j) {
        std::vector<cplx> w(p, 0.0);
        for (std::size_t i = 0; i < p; ++i) {
            cplx acc = 0.0;
            for (std::size_t k = 0; k < q; ++k) acc += m(i, k) * out.right(k, j);
            w[i] = acc;
        }
        double norm = 0.0;
        for (const auto& x : w) norm += std::norm(x);
        sraw[j] = std::sqrt(norm);
    }
    const double smax = sraw.empty() ? 0.0 : *std::max_element(sraw.begin(), sraw.end());
    const double zero_thr = 1e-12 * smax;

    auto mgs = [&](std::vector<cplx>& w) {
        for (const auto& u : ucols) {
            cplx proj = 0.0;
            for (std::size_t i = 0; i < p; ++i) proj += std::conj(u[i]) * w[i];
            for (std::size_t i = 0; i < p; ++i) w[i] -= proj * u[i];
        }
        double nn = 0.0;
        for (const auto& x : w) nn += std::norm(x);
        return std::sqrt(nn);
    };

    for (std::size_t j = 0; j < r; ++j) {
        if (sraw[j] <= zero_thr) {
            out.singular_values[j] = 0.0;
            continue;
        }
        out.singular_values[j] = sraw[j];
        std::vector<cplx> w(p, 0.0);
        for (std::size_t i = 0; i < p; ++i) {
            cplx acc = 0.0;
            for (std::size_t k = 0; k < q; ++k) acc += m(i, k) * out.right(k, j);
            w[i] = acc / sraw[j];
        }
        const double nn = mgs(w);
        if (nn > 0.5) {
            for (auto& x : w) x /= nn;
            ucols.push_back(std::move(w));
        } else {
            // Direction collapsed under orthogonalization; treat as zero.
            out.singular_values[j] = 0.0;
        }
    }

    // Complete U to a full unitary basis from standard vectors.
    for (std::size_t e = 0; e < p && ucols.size() < p; ++e) {
        std::vector<cplx> w(p, 0.0);
        w[e] = 1.0;
        const double nn = mgs(w);
        if (nn > 1e-3) {
            for (auto& x : w) x /= nn;
            ucols.push_back(std::move(w));
        }
    }
    if (ucols.size() != p) throw std::runtime_error("svd: failed to complete left basis");

    out.left = ComplexMatrix(p, p);
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t i = 0; i < p; ++i) out.left(i, j) = ucols[j][i];
    return out;
}

double operator_norm(const ComplexMatrix& m) {
    if (!all_finite(m)) throw std::invalid_argument("operator_norm: non-finite entries");
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    const auto s = svd(m).singular_values;
    return s.empty() ? 0.0 : s.front();
}

double trace_norm(const ComplexMatrix& m) {
    if (!all_finite(m)) throw std::invalid_argument("trace_norm: non-finite entries");
    const auto s = svd(m).singular_values;
    return std::accumulate(s.begin(), s.end(), 0.0);
}

HermitianMatrix matrix_sqrt_psd(const HermitianMatrix& a) {
    const EigResult eg = eig_hermitian(a);
    const std::size_t n = a.dim();
    double amax = 0.0;
    for (double l : eg.eigenvalues) amax = std::max(amax, std::abs(l));
    const double floor = -1e-8 * std::max(amax, 1e-300);
    for (double l : eg.eigenvalues)
        if (l < floor) throw std::invalid_argument("matrix_sqrt_psd: significantly negative spectrum");

    ComplexMatrix r(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double s = eg.eigenvalues[k] > 0.0 ? std::sqrt(eg.eigenvalues[k]) : 0.0;
        if (s == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx vis = s * eg.eigenvectors(i, k);
            for (std::size_t j = 0; j < n; ++j)
                r(i, j) += vis * std::conj(eg.eigenvectors(j, k));
        }
    }
    return HermitianMatrix(hermitize(r));
}

ComplexMatrix exp_i_hermitian(const HermitianMatrix& a, double phase) {
    const EigResult eg = eig_hermitian(a);
    const std::size_t n = a.dim();
    ComplexMatrix r(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const cplx f = std::exp(cplx(0.0, phase * eg.eigenvalues[k]));
        for (std::size_t i = 0; i < n; ++i) {
            const cplx vif = f * eg.eigenvectors(i, k);
            for (std::size_t j = 0; j < n; ++j)
                r(i, j) += vif * std::conj(eg.eigenvectors(j, k));
        }
    }
    return r;
}

std::pair<std::vector<cplx>, double> lstsq_span_min_norm(const std::vector<ComplexMatrix>& basis,
                                                         const ComplexMatrix& target) {
    const std::size_t d = basis.size();
    if (d == 0) throw std::invalid_argument("lstsq_span_min_norm: empty basis");

    // Normal equations G w = g with the Frobenius inner product; minimum-norm
    // solution through the eigendecomposition pseudo-inverse.
    ComplexMatrix g(d, d);
    std::vector<cplx> rhs(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            cplx acc = 0.0;
            for (std::size_t k = 0; k < basis[i].data().size(); ++k)
                acc += std::conj(basis[i].data()[k]) * basis[j].data()[k];
            g(i, j) = acc;
        }
        cplx acc = 0.0;
        for (std::size_t k = 0; k < basis[i].data().size(); ++k)
            acc += std::conj(basis[i].data()[k]) * target.data()[k];
        rhs[i] = acc;
    }

    const EigResult eg = eig_hermitian(HermitianMatrix(hermitize(g)));
    const double lmax = std::abs(eg.eigenvalues.back());
    const double thr = 1e-12 * std::max(lmax, 1e-300);

    std::vector<cplx> w(d, 0.0);
    for (std::size_t k = 0; k < d; ++k) {
        if (eg.eigenvalues[k] <= thr) continue;
        cplx coef = 0.0;
        for (std::size_t i = 0; i < d; ++i) coef += std::conj(eg.eigenvectors(i, k)) * rhs[i];
        coef /= eg.eigenvalues[k];
        for (std::size_t i = 0; i < d; ++i) w[i] += coef * eg.eigenvectors(i, k);
    }

    ComplexMatrix fit(target.rows(), target.cols());
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t k = 0; k < fit.data().size(); ++k)
            fit.data()[k] += w[i] * basis[i].data()[k];
    }
    const double resid = frobenius_norm(fit - target);
    return {w, resid};
}

}  // namespace qsl
