#include "designlift/symmetrizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "designlift/parallel.hpp"

namespace designlift {

double sym_subspace_dim(int n, int t) {
    double v = 1.0;
    for (int i = 1; i <= t; ++i) v = v * (n + i - 1) / i;
    return std::round(v);
}

namespace {

Eigen::Index ipow(int n, int t) {
    Eigen::Index v = 1;
    for (int i = 0; i < t; ++i) v *= n;
    return v;
}

std::vector<std::vector<int>> all_permutations(int t) {
    std::vector<int> p(static_cast<std::size_t>(t));
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

// big-endian digits of a tensor index: J = j_0 n^{t-1} + ... + j_{t-1}
void decode(Eigen::Index j, int n, int t, int* digits) {
    for (int s = t - 1; s >= 0; --s) {
        digits[s] = static_cast<int>(j % n);
        j /= n;
    }
}

}  // namespace

SymmetrizerProjector::SymmetrizerProjector(int n, int t, bool build_dense)
    : n_(n), t_(t), rows_(ipow(n, t)), perms_(all_permutations(t)) {
    if (n < 1) throw std::invalid_argument("sym_projector: dimension must be positive");
    if (t < 1 || t > 4) throw std::invalid_argument("sym_projector: tensor power must be in {1,2,3,4}");
    if (!build_dense) return;
    if (rows_ > kDenseSymBudget)
        throw std::length_error(
            "sym_projector: dense representation over budget (n^t > 4096); use the matrix-free "
            "applicator");

    Matrix p = Matrix::Zero(rows_, rows_);
    const double w = 1.0 / static_cast<double>(perms_.size());
    int digits[4], permuted[4];
    for (Eigen::Index col = 0; col < rows_; ++col) {
        decode(col, n_, t_, digits);
        for (const auto& perm : perms_) {
            Eigen::Index row = 0;
            for (int s = 0; s < t_; ++s) {
                permuted[s] = digits[perm[static_cast<std::size_t>(s)]];
                row = row * n_ + permuted[s];
            }
            p(row, col) += w;
        }
    }
    dense_ = std::move(p);
}

Vector SymmetrizerProjector::apply(const Vector& v) const {
    if (v.size() != rows_) throw std::invalid_argument("sym apply: vector length mismatch");
    Vector out(rows_);
    const double w = 1.0 / static_cast<double>(perms_.size());
    parallel_for_index(rows_, [&](std::ptrdiff_t k) {
        int digits[4];
        decode(k, n_, t_, digits);
        Complex acc(0, 0);
        for (const auto& perm : perms_) {
            Eigen::Index src = 0;
            for (int s = 0; s < t_; ++s) src = src * n_ + digits[perm[static_cast<std::size_t>(s)]];
            acc += v(src);
        }
        out(k) = w * acc;
    });
    return out;
}

Vector SymmetrizerProjector::apply_serial(const Vector& v) const {
    if (v.size() != rows_) throw std::invalid_argument("sym apply: vector length mismatch");
    Vector out(rows_);
    const double w = 1.0 / static_cast<double>(perms_.size());
    serial_for_index(rows_, [&](std::ptrdiff_t k) {
        int digits[4];
        decode(k, n_, t_, digits);
        Complex acc(0, 0);
        for (const auto& perm : perms_) {
            Eigen::Index src = 0;
            for (int s = 0; s < t_; ++s) src = src * n_ + digits[perm[static_cast<std::size_t>(s)]];
            acc += v(src);
        }
        out(k) = w * acc;
    });
    return out;
}

SymmetrizerProjector sym_projector(int n, int t, bool build_dense) {
    return SymmetrizerProjector(n, t, build_dense);
}

double sym3_trace(const HermitianMatrix& x, const HermitianMatrix& y, const HermitianMatrix& z) {
    const Eigen::Index n = x.dim();
    if (y.dim() != n || z.dim() != n)
        throw std::invalid_argument("sym3_trace: dimension mismatch between arguments");
    const Complex tx = x.m.trace(), ty = y.m.trace(), tz = z.m.trace();
    const Complex tyz = (y.m * z.m).trace();
    const Complex txz = (x.m * z.m).trace();
    const Complex txy = (x.m * y.m).trace();
    const Complex txyz = (x.m * y.m * z.m).trace();
    const Complex txzy = (x.m * z.m * y.m).trace();
    const Complex total = tx * ty * tz + tx * tyz + ty * txz + tz * txy + txyz + txzy;
    return total.real() / 6.0;
}

}  // namespace designlift
