// Hermitian eigendecomposition (cyclic Jacobi), SVD, matrix functions and norms.
#pragma once

#include <vector>

#include "qsl/complex_matrix.hpp"

namespace qsl {

// Square matrix validated to be Hermitian: max|A - A†| <= 1e-10.
// Stores the hermitized (A + A†)/2.
class HermitianMatrix {
public:
    explicit HermitianMatrix(const ComplexMatrix& a);
    const ComplexMatrix& matrix() const { return m_; }
    std::size_t dim() const { return m_.rows(); }

    static constexpr double kTol = 1e-10;

private:
    ComplexMatrix m_;
};

struct EigResult {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // columns, unitary
};

struct SvdResult {
    ComplexMatrix left;                   // p x p unitary
    std::vector<double> singular_values;  // descending, length min(p,q)
    ComplexMatrix right;                  // q x q unitary, M = U diag(s) V†
};

// A = V diag(lambda) V†, eigenvalues ascending.
EigResult eig_hermitian(const HermitianMatrix& a);

SvdResult svd(const ComplexMatrix& m);

double operator_norm(const ComplexMatrix& m);
double trace_norm(const ComplexMatrix& m);

// Square root of a PSD Hermitian matrix. Eigenvalues in
// [-1e-8*||A||, 0) are clipped to zero; below that is an error.
HermitianMatrix matrix_sqrt_psd(const HermitianMatrix& a);

// exp(i * phase * A) for Hermitian A, via eigendecomposition.
ComplexMatrix exp_i_hermitian(const HermitianMatrix& a, double phase);

// Minimum-norm least-squares solution of min ||sum_i w_i B_i - T||_F over w.
// Returns (w, residual_frobenius).
std::pair<std::vector<cplx>, double> lstsq_span_min_norm(const std::vector<ComplexMatrix>& basis,
                                                         const ComplexMatrix& target);

}  // namespace qsl
