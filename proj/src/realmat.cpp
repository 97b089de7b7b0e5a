#include "qsl/realmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qsl {

RealMatrix RealMatrix::identity(std::size_t n) {
    RealMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

RealMatrix& RealMatrix::operator+=(const RealMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("RealMatrix +=: shape mismatch");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

RealMatrix& RealMatrix::operator-=(const RealMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("RealMatrix -=: shape mismatch");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
}

RealMatrix& RealMatrix::operator*=(double s) {
    for (auto& v : a_) v *= s;
    return *this;
}

RealMatrix operator+(RealMatrix a, const RealMatrix& b) { return a += b; }
RealMatrix operator-(RealMatrix a, const RealMatrix& b) { return a -= b; }
RealMatrix operator*(double s, RealMatrix a) { return a *= s; }

RealMatrix operator*(const RealMatrix& a, const RealMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("RealMatrix *: inner dimension mismatch");
    RealMatrix c(a.rows(), b.cols());
    const std::size_t work = a.rows() * a.cols() * b.cols();
#pragma omp parallel for schedule(static) if (work > 262144)
    for (long long ii = 0; ii < static_cast<long long>(a.rows()); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

RealMatrix rtranspose(const RealMatrix& m) {
    RealMatrix r(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(j, i) = m(i, j);
    return r;
}

double rtrace(const RealMatrix& m) {
    double t = 0.0;
    for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) t += m(i, i);
    return t;
}

double rdot(const RealMatrix& a, const RealMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("rdot: shape mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) s += a.data()[i] * b.data()[i];
    return s;
}

double rmax_abs(const RealMatrix& m) {
    double s = 0.0;
    for (double v : m.data()) s = std::max(s, std::abs(v));
    return s;
}

void rsymmetrize(RealMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j) {
            const double v = 0.5 * (m(i, j) + m(j, i));
            m(i, j) = v;
            m(j, i) = v;
        }
}

RealMatrix realify(const ComplexMatrix& a) {
    const std::size_t r = a.rows(), c = a.cols();
    RealMatrix m(2 * r, 2 * c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            const double re = a(i, j).real(), im = a(i, j).imag();
            m(i, j) = re;
            m(i, j + c) = -im;
            m(i + r, j) = im;
            m(i + r, j + c) = re;
        }
    return m;
}

ComplexMatrix derealify(const RealMatrix& m) {
    if (m.rows() % 2 != 0 || m.cols() % 2 != 0)
        throw std::invalid_argument("derealify: odd dimensions");
    const std::size_t r = m.rows() / 2, c = m.cols() / 2;
    ComplexMatrix a(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            const double re = 0.5 * (m(i, j) + m(i + r, j + c));
            const double im = 0.5 * (m(i + r, j) - m(i, j + c));
            a(i, j) = cplx(re, im);
        }
    return a;
}

RealMatrix jproject(const RealMatrix& m) { return realify(derealify(m)); }

RealEig sym_eig(const RealMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("sym_eig: matrix not square");
    const std::size_t n = a.rows();
    RealMatrix w = a;
    rsymmetrize(w);
    RealMatrix v = RealMatrix::identity(n);

    double frob = 0.0;
    for (double x : w.data()) frob += x * x;
    const double limit = 5e-16 * std::max(std::sqrt(frob), 1e-300);
    const int max_sweeps = 64;

    for (int sweep = 0; sweep < max_sweeps && n > 1; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(w(p, q)));
        if (off <= limit) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double b = w(p, q);
                const double ab = std::abs(b);
                if (ab <= 1e-2 * limit / static_cast<double>(n)) continue;
                const double app = w(p, p), aqq = w(q, q);
                const double tau = (aqq - app) / (2.0 * b);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double wkp = w(k, p), wkq = w(k, q);
                    w(k, p) = c * wkp - s * wkq;
                    w(k, q) = s * wkp + c * wkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double wpk = w(p, k), wqk = w(q, k);
                    w(p, k) = c * wpk - s * wqk;
                    w(q, k) = s * wpk + c * wqk;
                }
                w(p, p) = app - t * b;
                w(q, q) = aqq + t * b;
                w(p, q) = 0.0;
                w(q, p) = 0.0;

                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<double> lam(n);
    for (std::size_t i = 0; i < n; ++i) lam[i] = w(i, i);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return lam[i] < lam[j]; });

    RealEig r;
    r.eigenvalues.resize(n);
    r.vectors = RealMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        r.eigenvalues[j] = lam[order[j]];
        for (std::size_t i = 0; i < n; ++i) r.vectors(i, j) = v(i, order[j]);
    }
    return r;
}

double sym_eig_min(const RealMatrix& a) { return sym_eig(a).eigenvalues.front(); }

bool cholesky(const RealMatrix& a, RealMatrix& lower) {
    if (a.rows() != a.cols()) throw std::invalid_argument("cholesky: matrix not square");
    const std::size_t n = a.rows();
    lower = RealMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= lower(j, k) * lower(j, k);
        if (!(d > 0.0)) return false;
        const double ljj = std::sqrt(d);
        lower(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= lower(i, k) * lower(j, k);
            lower(i, j) = s / ljj;
        }
    }
    return true;
}

void tri_solve_lower(const RealMatrix& lower, RealMatrix& b) {
    const std::size_t n = lower.rows();
    if (b.rows() != n) throw std::invalid_argument("tri_solve_lower: shape mismatch");
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = b(i, j);
            for (std::size_t k = 0; k < i; ++k) s -= lower(i, k) * b(k, j);
            b(i, j) = s / lower(i, i);
        }
    }
}

}  // namespace qsl
