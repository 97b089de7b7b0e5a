// Real dense matrices and the realification of complex Hermitian blocks,
// used by the interior-point solver.
#pragma once

#include <vector>

#include "qsl/complex_matrix.hpp"

namespace qsl {

class RealMatrix {
public:
    RealMatrix() = default;
    RealMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

    static RealMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const double& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    std::vector<double>& data() { return a_; }
    const std::vector<double>& data() const { return a_; }

    RealMatrix& operator+=(const RealMatrix& o);
    RealMatrix& operator-=(const RealMatrix& o);
    RealMatrix& operator*=(double s);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> a_;
};

RealMatrix operator+(RealMatrix a, const RealMatrix& b);
RealMatrix operator-(RealMatrix a, const RealMatrix& b);
RealMatrix operator*(double s, RealMatrix a);
RealMatrix operator*(const RealMatrix& a, const RealMatrix& b);

RealMatrix rtranspose(const RealMatrix& m);
double rtrace(const RealMatrix& m);
double rdot(const RealMatrix& a, const RealMatrix& b);  // sum a_ij b_ij
double rmax_abs(const RealMatrix& m);
void rsymmetrize(RealMatrix& m);

// Standard embedding of a complex matrix: [[Re A, -Im A], [Im A, Re A]].
// Hermitian input gives a real symmetric block whose eigenvalues are those
// of A with doubled multiplicities.
RealMatrix realify(const ComplexMatrix& a);

// Inverse of realify for J-invariant blocks; averages the redundant halves.
ComplexMatrix derealify(const RealMatrix& m);

// Projection onto the J-invariant subspace: realify(derealify(m)).
RealMatrix jproject(const RealMatrix& m);

struct RealEig {
    std::vector<double> eigenvalues;  // ascending
    RealMatrix vectors;               // columns
};

RealEig sym_eig(const RealMatrix& a);
double sym_eig_min(const RealMatrix& a);

// Lower-triangular Cholesky of a symmetric PD matrix.
// Returns false if a pivot fails.
bool cholesky(const RealMatrix& a, RealMatrix& lower);

// Solve L X = B (L lower triangular), in place on b.
void tri_solve_lower(const RealMatrix& lower, RealMatrix& b);

}  // namespace qsl
