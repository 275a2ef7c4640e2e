#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "jass/rng.hpp"

namespace jass {

using cplx = std::complex<double>;
using ComplexVector = std::vector<cplx>;

/// Dense complex matrix, row-major.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }

    cplx& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    cplx* row(std::size_t r) noexcept { return data_.data() + r * cols_; }
    const cplx* row(std::size_t r) const noexcept { return data_.data() + r * cols_; }

    std::vector<cplx>& data() noexcept { return data_; }
    const std::vector<cplx>& data() const noexcept { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

struct EigenDecomposition {
    ComplexMatrix eigenvectors;       // unitary, columns ordered like eigenvalues
    std::vector<double> eigenvalues;  // sorted descending
};

// Tolerances are fixed module constants, not user configuration.
namespace linalg_tol {
inline constexpr double hermitian_check = 1e-9;    // relative to ||X||_F
inline constexpr double jacobi_offdiag = 1e-12;    // relative to ||X||_F
inline constexpr int jacobi_max_sweeps = 100;
inline constexpr double pinv_cutoff = 1e-12;       // relative to largest Gram eigenvalue
inline constexpr double power_norm_floor = 1e-300; // below this, keep the current iterate
} // namespace linalg_tol

double norm_sq(const ComplexVector& v) noexcept;
double frob_norm_sq(const ComplexMatrix& m) noexcept;

ComplexMatrix adjoint(const ComplexMatrix& m);
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
/// a * b^H without forming b^H.
ComplexMatrix matmul_adjoint_rhs(const ComplexMatrix& a, const ComplexMatrix& b);
/// a * a^H (Hermitian result).
ComplexMatrix self_outer(const ComplexMatrix& a);
/// a^H * a (Hermitian result).
ComplexMatrix gram(const ComplexMatrix& a);
ComplexVector matvec(const ComplexMatrix& a, const ComplexVector& x);
/// a * conj(x).
ComplexVector matvec_conj(const ComplexMatrix& a, const ComplexVector& x);

/// Approximate principal eigenvectors of a Hermitian PSD matrix by power
/// iteration with deflation: each column is t_max normalize-and-multiply steps
/// from a random CN(0, I) start, after which its Rayleigh-quotient estimate is
/// deflated out. Columns are unit-norm but only approximately orthonormal for
/// small t_max. Column i draws from rng.fork(i).
ComplexMatrix principal_subspace(const ComplexMatrix& x, std::size_t num_vecs,
                                 std::size_t t_max, RandomStream& rng);

/// Full eigendecomposition of a Hermitian matrix via cyclic complex Jacobi
/// rotations. Eigenvalues are returned sorted descending.
EigenDecomposition exact_hermitian_evd(const ComplexMatrix& x);

/// Moore-Penrose pseudoinverse of a tall matrix (rows >= cols), computed from
/// the eigendecomposition of the small Gram matrix a^H a. Rank deficiency is
/// handled by zeroing Gram eigenvalues below the relative cutoff.
ComplexMatrix pseudoinverse_tall(const ComplexMatrix& a);

/// (I - a a_pinv) v, evaluated as v - a (a_pinv v) so the projector is never
/// materialized.
ComplexMatrix residual_project(const ComplexMatrix& a, const ComplexMatrix& a_pinv,
                               const ComplexMatrix& v);
ComplexVector residual_project(const ComplexMatrix& a, const ComplexMatrix& a_pinv,
                               const ComplexVector& v);

} // namespace jass
