#pragma once

#include <vector>

#include "designlift/hermitian.hpp"

namespace designlift::kernels {

// Hot loops shared by the design, measurement and verification layers. Every
// kernel comes in an OpenMP flavor and a serial reference flavor with the
// same per-entry accumulation order, so the two agree bit for bit and the
// parallel results do not depend on the thread count.

// t-fold tensor powers of the columns: out.col(i) = v_i (x) ... (x) v_i.
Matrix tensor_power_columns(const std::vector<Vector>& vectors, int t);
Matrix tensor_power_columns_serial(const std::vector<Vector>& vectors, int t);

// M = sum_i w_i c_i c_i^* for the columns of cols. Parallel over output rows;
// each entry accumulates over i in ascending order.
Matrix weighted_gram(const Matrix& cols, const std::vector<double>& weights);
Matrix weighted_gram_serial(const Matrix& cols, const std::vector<double>& weights);

// y = sum_i w_i <c_i, v> c_i without forming the Gram matrix.
Vector weighted_gram_apply(const Matrix& cols, const std::vector<double>& weights, const Vector& v);
Vector weighted_gram_apply_serial(const Matrix& cols, const std::vector<double>& weights,
                                  const Vector& v);

// out_j = Re(a_j^* Z a_j), the rank-one quadratic forms of the measurement map.
RealVector quadratic_forms(const std::vector<Vector>& vectors, const Matrix& z);
RealVector quadratic_forms_serial(const std::vector<Vector>& vectors, const Matrix& z);

// M = sum_j y_j a_j a_j^*, the adjoint accumulation.
Matrix rank_one_accumulate(const std::vector<Vector>& vectors, const RealVector& y);
Matrix rank_one_accumulate_serial(const std::vector<Vector>& vectors, const RealVector& y);

}  // namespace designlift::kernels
