#pragma once

#include <Eigen/Core>
#include <complex>
#include <stdexcept>
#include <utility>

namespace designlift {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Entrywise conjugate-symmetry tolerance for accepting a matrix as Hermitian.
inline constexpr double kHermitianTol = 1e-12;

// Largest |A(i,j) - conj(A(j,i))| over the matrix.
double max_asymmetry(const Matrix& a);

// Dense complex Hermitian matrix. Value type; construct through one of the
// factories so the conjugate-symmetry invariant is established up front.
struct HermitianMatrix {
    Matrix m;

    HermitianMatrix() = default;
    // unchecked; for results that are Hermitian by construction
    explicit HermitianMatrix(Matrix in) : m(std::move(in)) {}

    Eigen::Index dim() const { return m.rows(); }

    // Real part of the trace (the imaginary part vanishes for Hermitian input).
    double trace() const { return m.trace().real(); }

    double frobenius() const { return m.norm(); }

    // Validates conjugate symmetry; throws std::invalid_argument with the
    // maximum asymmetry when the input is not Hermitian within tol.
    static HermitianMatrix checked(Matrix in, double tol = kHermitianTol);

    // Forces Hermitian-ness as (A + A*)/2. For inputs that are Hermitian up
    // to rounding from arithmetic.
    static HermitianMatrix symmetrized(const Matrix& in);

    static HermitianMatrix zero(Eigen::Index n);
    static HermitianMatrix identity(Eigen::Index n);
    static HermitianMatrix diagonal(const RealVector& d);
};

// Eigendecomposition of a Hermitian matrix. Eigenvalues are real and sorted
// by decreasing |value| (stable order on ties); eigenvectors are the matching
// unitary columns.
struct SpectralDecomposition {
    RealVector eigenvalues;
    Matrix eigenvectors;

    Matrix reconstruct() const {
        return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.adjoint();
    }
};

// Cyclic complex Jacobi eigensolver. Deterministic for fixed input; iterates
// sweeps until the off-diagonal Frobenius mass falls below 1e-12 relative.
SpectralDecomposition eig_hermitian(const HermitianMatrix& z);

// Spectral truncation: Z = Z_r + Z_c where Z_r keeps the r eigenvalues of
// largest magnitude (stable tie-break by sort position).
std::pair<HermitianMatrix, HermitianMatrix> rank_split(const HermitianMatrix& z, int r);

enum class SchattenNorm { frobenius, nuclear, op };

double schatten_norm(const HermitianMatrix& z, SchattenNorm which);

// Eigenvalue soft-thresholding, the proximal map of tau * nuclear norm on
// Hermitian matrices.
HermitianMatrix svt(const HermitianMatrix& z, double tau);

// Variant with the PSD cone folded in: eigenvalues map to max(lambda-tau, 0).
HermitianMatrix svt_psd(const HermitianMatrix& z, double tau);

// Spectral absolute value |Z| = U |diag| U*.
HermitianMatrix spectral_abs(const HermitianMatrix& z);

// Kronecker product, row-major index convention: (A (x) B)[i*p+k, j*q+l] =
// A[i,j] B[k,l].
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace designlift
