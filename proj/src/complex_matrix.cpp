#include "qsl/complex_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qsl {

namespace {

void check_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument(std::string(what) + ": shape mismatch");
}

}  // namespace

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::zeros(std::size_t rows, std::size_t cols) {
    return ComplexMatrix(rows, cols);
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
    std::size_t r = rows.size();
    std::size_t c = r ? rows.begin()->size() : 0;
    ComplexMatrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != c) throw std::invalid_argument("from_rows: ragged rows");
        std::size_t j = 0;
        for (const auto& v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    check_same_shape(*this, o, "operator+=");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    check_same_shape(*this, o, "operator-=");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (auto& v : a_) v *= s;
    return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

ComplexMatrix matmul_reference(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: inner dimension mismatch");
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: inner dimension mismatch");
    ComplexMatrix c(a.rows(), b.cols());
    const std::size_t work = a.rows() * a.cols() * b.cols();
    // Same i-k-j summation order as matmul_reference, so results are
    // bit-identical regardless of thread count.
#pragma omp parallel for schedule(static) if (work > 65536)
    for (long long ii = 0; ii < static_cast<long long>(a.rows()); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

ComplexMatrix adjoint(const ComplexMatrix& m) {
    ComplexMatrix r(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(j, i) = std::conj(m(i, j));
    return r;
}

ComplexMatrix transpose(const ComplexMatrix& m) {
    ComplexMatrix r(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(j, i) = m(i, j);
    return r;
}

ComplexMatrix conjugate(const ComplexMatrix& m) {
    ComplexMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = std::conj(m(i, j));
    return r;
}

cplx trace(const ComplexMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("trace: matrix not square");
    cplx t = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
    return t;
}

double frobenius_norm(const ComplexMatrix& m) {
    double s = 0.0;
    for (const auto& v : m.data()) s += std::norm(v);
    return std::sqrt(s);
}

double max_abs(const ComplexMatrix& m) {
    double s = 0.0;
    for (const auto& v : m.data()) s = std::max(s, std::abs(v));
    return s;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_shape(a, b, "max_abs_diff");
    double s = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        s = std::max(s, std::abs(a.data()[i] - b.data()[i]));
    return s;
}

bool all_finite(const ComplexMatrix& m) {
    for (const auto& v : m.data())
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
    if (!m.is_square()) return false;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.cols(); ++j)
            if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
    return true;
}

ComplexMatrix hermitize(const ComplexMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("hermitize: matrix not square");
    ComplexMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            r(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    return r;
}

double inner_real(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_shape(a, b, "inner_real");
    double s = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        s += std::real(std::conj(a.data()[i]) * b.data()[i]);
    return s;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx(0.0, 0.0)) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return r;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho,
                            const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep) {
    if (!rho.is_square()) throw std::invalid_argument("partial_trace: matrix not square");
    std::size_t prod = 1;
    for (std::size_t d : dims) prod *= d;
    if (prod != rho.rows())
        throw std::invalid_argument("partial_trace: dims product does not match matrix dimension");
    for (std::size_t k : keep)
        if (k >= dims.size()) throw std::invalid_argument("partial_trace: keep index out of range");

    std::vector<bool> kept(dims.size(), false);
    for (std::size_t k : keep) kept[k] = true;

    // Mixed-radix strides in the full space, row-major subsystem order.
    std::vector<std::size_t> stride(dims.size(), 1);
    for (std::size_t s = dims.size(); s-- > 1;) stride[s - 1] = stride[s] * dims[s];

    std::size_t dim_keep = 1, dim_tr = 1;
    std::vector<std::size_t> keep_idx, tr_idx;
    for (std::size_t s = 0; s < dims.size(); ++s) {
        if (kept[s]) {
            dim_keep *= dims[s];
            keep_idx.push_back(s);
        } else {
            dim_tr *= dims[s];
            tr_idx.push_back(s);
        }
    }

    auto offset = [&](const std::vector<std::size_t>& subs, std::size_t flat,
                      const std::vector<std::size_t>& which) {
        std::size_t off = 0;
        for (std::size_t s = which.size(); s-- > 0;) {
            const std::size_t d = dims[which[s]];
            off += (flat % d) * stride[which[s]];
            flat /= d;
        }
        (void)subs;
        return off;
    };

    ComplexMatrix out(dim_keep, dim_keep);
    for (std::size_t kr = 0; kr < dim_keep; ++kr) {
        const std::size_t roff = offset(dims, kr, keep_idx);
        for (std::size_t kc = 0; kc < dim_keep; ++kc) {
            const std::size_t coff = offset(dims, kc, keep_idx);
            cplx acc = 0.0;
            for (std::size_t t = 0; t < dim_tr; ++t) {
                const std::size_t toff = offset(dims, t, tr_idx);
                acc += rho(roff + toff, coff + toff);
            }
            out(kr, kc) = acc;
        }
    }
    return out;
}

}  // namespace qsl
