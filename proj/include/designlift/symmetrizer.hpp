#pragma once

#include <optional>
#include <vector>

#include "designlift/hermitian.hpp"

namespace designlift {

// Rows above which the dense symmetrizer representation is refused (t = 3
// supports n <= 16 dense; the matrix-free applicator has no such limit).
inline constexpr Eigen::Index kDenseSymBudget = 4096;

// binom(n + t - 1, t), the dimension of the totally symmetric subspace.
double sym_subspace_dim(int n, int t);

// Orthogonal projector onto Sym^t of (C^n)^{(x) t}. Holds the dense matrix
// when requested and affordable; apply() always works matrix-free by
// averaging the t! tensor-slot permutations.
class SymmetrizerProjector {
  public:
    SymmetrizerProjector(int n, int t, bool build_dense);

    int base_dim() const { return n_; }
    int tensor_power() const { return t_; }
    Eigen::Index rows() const { return rows_; }
    double trace() const { return sym_subspace_dim(n_, t_); }

    const std::optional<Matrix>& dense() const { return dense_; }

    // y = P v without materializing P.
    Vector apply(const Vector& v) const;

    // serial reference for the parallel apply, kept for kernel tests
    Vector apply_serial(const Vector& v) const;

  private:
    int n_ = 0;
    int t_ = 0;
    Eigen::Index rows_ = 0;
    std::vector<std::vector<int>> perms_;  // all permutations of {0..t-1}
    std::optional<Matrix> dense_;
};

// Builds the projector; build_dense requests the dense representation and
// throws std::length_error when n^t exceeds the budget.
SymmetrizerProjector sym_projector(int n, int t, bool build_dense = true);

// tr(P_sym3 (X (x) Y (x) Z)) via the closed six-term trace formula.
double sym3_trace(const HermitianMatrix& x, const HermitianMatrix& y, const HermitianMatrix& z);

}  // namespace designlift
