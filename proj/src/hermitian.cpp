#include "designlift/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace designlift {

double max_asymmetry(const Matrix& a) {
    double worst = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i <= j; ++i)
            worst = std::max(worst, std::abs(a(i, j) - std::conj(a(j, i))));
    return worst;
}

HermitianMatrix HermitianMatrix::checked(Matrix in, double tol) {
    if (in.rows() != in.cols()) throw std::invalid_argument("HermitianMatrix: matrix not square");
    const double asym = max_asymmetry(in);
    if (asym > tol) {
        std::ostringstream os;
        os << "HermitianMatrix: input not Hermitian, max asymmetry " << asym << " exceeds tolerance "
           << tol;
        throw std::invalid_argument(os.str());
    }
    return HermitianMatrix{std::move(in)};
}

HermitianMatrix HermitianMatrix::symmetrized(const Matrix& in) {
    if (in.rows() != in.cols()) throw std::invalid_argument("HermitianMatrix: matrix not square");
    return HermitianMatrix{0.5 * (in + in.adjoint())};
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index n) {
    return HermitianMatrix{Matrix::Zero(n, n)};
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index n) {
    return HermitianMatrix{Matrix::Identity(n, n)};
}

HermitianMatrix HermitianMatrix::diagonal(const RealVector& d) {
    Matrix m = Matrix::Zero(d.size(), d.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) m(i, i) = d(i);
    return HermitianMatrix{std::move(m)};
}

namespace {

// One cyclic sweep of two-sided complex Jacobi rotations on the upper
// triangle. A and V are updated in place; A converges to diag(eigenvalues).
void jacobi_sweep(Matrix& a, Matrix& v) {
    const Eigen::Index n = a.rows();
    for (Eigen::Index p = 0; p < n - 1; ++p) {
        for (Eigen::Index q = p + 1; q < n; ++q) {
            const Complex apq = a(p, q);
            const double off = std::abs(apq);
            if (off == 0.0) continue;
            const double app = a(p, p).real();
            const double aqq = a(q, q).real();

            // 2x2 Hermitian block [[app, apq],[conj(apq), aqq]]: find the
            // rotation [[c, s],[-conj(s), c]] (c real) diagonalizing it.
            const double diff = aqq - app;
            const double t_abs = [&] {
                const double theta = diff / (2.0 * off);
                // smaller-magnitude root keeps the rotation close to identity
                return (theta >= 0.0) ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                                      : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
            }();
            const double c = 1.0 / std::sqrt(1.0 + t_abs * t_abs);
            const Complex s = (apq / off) * (t_abs * c);

            // apply on both sides: rows/cols p and q
            for (Eigen::Index k = 0; k < n; ++k) {
                const Complex akp = a(k, p);
                const Complex akq = a(k, q);
                a(k, p) = c * akp - std::conj(s) * akq;
                a(k, q) = s * akp + c * akq;
            }
            for (Eigen::Index k = 0; k < n; ++k) {
                const Complex apk = a(p, k);
                const Complex aqk = a(q, k);
                a(p, k) = c * apk - s * aqk;
                a(q, k) = std::conj(s) * apk + c * aqk;
            }
            a(p, q) = Complex(0, 0);
            a(q, p) = Complex(0, 0);
            a(p, p) = Complex(a(p, p).real(), 0.0);
            a(q, q) = Complex(a(q, q).real(), 0.0);

            for (Eigen::Index k = 0; k < n; ++k) {
                const Complex vkp = v(k, p);
                const Complex vkq = v(k, q);
                v(k, p) = c * vkp - std::conj(s) * vkq;
                v(k, q) = s * vkp + c * vkq;
            }
        }
    }
}

double offdiag_norm(const Matrix& a) {
    double sum = 0.0;
    const Eigen::Index n = a.rows();
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            if (i != j) sum += std::norm(a(i, j));
    return std::sqrt(sum);
}

}  // namespace

SpectralDecomposition eig_hermitian(const HermitianMatrix& z) {
    const double asym = max_asymmetry(z.m);
    if (asym > kHermitianTol) {
        std::ostringstream os;
        os << "eig_hermitian: input not Hermitian, max asymmetry " << asym;
        throw std::invalid_argument(os.str());
    }
    const Eigen::Index n = z.dim();
    Matrix a = 0.5 * (z.m + z.m.adjoint());  // exact symmetry for the iteration
    Matrix v = Matrix::Identity(n, n);

    const double scale = std::max(1.0, a.norm());
    constexpr int kMaxSweeps = 64;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (offdiag_norm(a) <= 1e-12 * scale) break;
        jacobi_sweep(a, v);
    }

    RealVector raw(n);
    for (Eigen::Index i = 0; i < n; ++i) raw(i) = a(i, i).real();

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
        return std::abs(raw(x)) > std::abs(raw(y));
    });

    SpectralDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.eigenvalues(i) = raw(order[static_cast<std::size_t>(i)]);
        out.eigenvectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
    }
    return out;
}

std::pair<HermitianMatrix, HermitianMatrix> rank_split(const HermitianMatrix& z, int r) {
    const Eigen::Index n = z.dim();
    if (r < 1 || r > n) throw std::invalid_argument("rank_split: r out of range [1, n]");
    const SpectralDecomposition ed = eig_hermitian(z);
    RealVector head = ed.eigenvalues;
    RealVector tail = ed.eigenvalues;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (i < r)
            tail(i) = 0.0;
        else
            head(i) = 0.0;
    }
    Matrix zr = ed.eigenvectors * head.asDiagonal() * ed.eigenvectors.adjoint();
    // exact complement keeps Z = Z_r + Z_c to machine precision
    Matrix zc = z.m - zr;
    return {HermitianMatrix::symmetrized(zr), HermitianMatrix::symmetrized(zc)};
}

double schatten_norm(const HermitianMatrix& z, SchattenNorm which) {
    if (which == SchattenNorm::frobenius) return z.m.norm();
    const SpectralDecomposition ed = eig_hermitian(z);
    if (which == SchattenNorm::op)
        return ed.eigenvalues.size() == 0 ? 0.0 : ed.eigenvalues.cwiseAbs().maxCoeff();
    return ed.eigenvalues.cwiseAbs().sum();
}

namespace {

HermitianMatrix svt_impl(const HermitianMatrix& z, double tau, bool clamp_psd) {
    if (tau < 0.0) throw std::invalid_argument("svt: negative threshold");
    const SpectralDecomposition ed = eig_hermitian(z);
    RealVector lam = ed.eigenvalues;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        const double x = lam(i);
        double s = (x >= 0.0 ? 1.0 : -1.0) * std::max(std::abs(x) - tau, 0.0);
        if (clamp_psd && s < 0.0) s = 0.0;
        lam(i) = s;
    }
    return HermitianMatrix::symmetrized(ed.eigenvectors * lam.asDiagonal() *
                                        ed.eigenvectors.adjoint());
}

}  // namespace

HermitianMatrix svt(const HermitianMatrix& z, double tau) { return svt_impl(z, tau, false); }

HermitianMatrix svt_psd(const HermitianMatrix& z, double tau) { return svt_impl(z, tau, true); }

HermitianMatrix spectral_abs(const HermitianMatrix& z) {
    const SpectralDecomposition ed = eig_hermitian(z);
    RealVector lam = ed.eigenvalues.cwiseAbs();
    return HermitianMatrix::symmetrized(ed.eigenvectors * lam.asDiagonal() *
                                        ed.eigenvectors.adjoint());
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace designlift
