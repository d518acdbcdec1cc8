#include "designlift/kernels.hpp"

#include <stdexcept>

#include "designlift/parallel.hpp"

namespace designlift::kernels {

namespace {

Eigen::Index ipow(Eigen::Index n, int t) {
    Eigen::Index v = 1;
    for (int i = 0; i < t; ++i) v *= n;
    return v;
}

Vector tensor_power(const Vector& v, int t) {
    Vector out = v;
    for (int s = 1; s < t; ++s) {
        Vector next(out.size() * v.size());
        for (Eigen::Index i = 0; i < out.size(); ++i)
            next.segment(i * v.size(), v.size()) = out(i) * v;
        out.swap(next);
    }
    return out;
}

template <class Loop>
Matrix tensor_power_columns_impl(const std::vector<Vector>& vectors, int t, Loop&& loop) {
    if (vectors.empty()) throw std::invalid_argument("tensor_power_columns: empty vector set");
    const Eigen::Index n = vectors.front().size();
    const Eigen::Index rows = ipow(n, t);
    Matrix cols(rows, static_cast<Eigen::Index>(vectors.size()));
    loop(static_cast<std::ptrdiff_t>(vectors.size()), [&](std::ptrdiff_t i) {
        cols.col(i) = tensor_power(vectors[static_cast<std::size_t>(i)], t);
    });
    return cols;
}

template <class Loop>
Matrix weighted_gram_impl(const Matrix& cols, const std::vector<double>& weights, Loop&& loop) {
    const Eigen::Index rows = cols.rows();
    const Eigen::Index count = cols.cols();
    if (static_cast<Eigen::Index>(weights.size()) != count)
        throw std::invalid_argument("weighted_gram: weight count mismatch");
    Matrix m(rows, rows);
    loop(static_cast<std::ptrdiff_t>(rows), [&](std::ptrdiff_t r) {
        for (Eigen::Index c = 0; c < rows; ++c) {
            Complex acc(0, 0);
            for (Eigen::Index i = 0; i < count; ++i)
                acc += weights[static_cast<std::size_t>(i)] * cols(r, i) * std::conj(cols(c, i));
            m(r, c) = acc;
        }
    });
    return m;
}

template <class Loop>
Vector weighted_gram_apply_impl(const Matrix& cols, const std::vector<double>& weights,
                                const Vector& v, Loop&& loop) {
    const Eigen::Index rows = cols.rows();
    const Eigen::Index count = cols.cols();
    if (v.size() != rows) throw std::invalid_argument("weighted_gram_apply: length mismatch");
    // phase 1: coefficients w_i <c_i, v>, one slot per column
    Vector coeff(count);
    loop(static_cast<std::ptrdiff_t>(count), [&](std::ptrdiff_t i) {
        coeff(i) = weights[static_cast<std::size_t>(i)] * cols.col(i).dot(v);
    });
    // phase 2: accumulate per output entry in ascending column order
    Vector y(rows);
    loop(static_cast<std::ptrdiff_t>(rows), [&](std::ptrdiff_t r) {
        Complex acc(0, 0);
        for (Eigen::Index i = 0; i < count; ++i) acc += coeff(i) * cols(r, i);
        y(r) = acc;
    });
    return y;
}

template <class Loop>
RealVector quadratic_forms_impl(const std::vector<Vector>& vectors, const Matrix& z, Loop&& loop) {
    for (const Vector& a : vectors)
        if (a.size() != z.rows()) throw std::invalid_argument("quadratic_forms: dimension mismatch");
    RealVector out(static_cast<Eigen::Index>(vectors.size()));
    loop(static_cast<std::ptrdiff_t>(vectors.size()), [&](std::ptrdiff_t j) {
        const Vector& a = vectors[static_cast<std::size_t>(j)];
        // real part of a^* Z a accumulated directly
        double acc = 0.0;
        for (Eigen::Index c = 0; c < z.cols(); ++c) {
            Complex partial(0, 0);
            for (Eigen::Index r = 0; r < z.rows(); ++r) partial += std::conj(a(r)) * z(r, c);
            acc += (partial * a(c)).real();
        }
        out(j) = acc;
    });
    return out;
}

template <class Loop>
Matrix rank_one_accumulate_impl(const std::vector<Vector>& vectors, const RealVector& y,
                                Loop&& loop) {
    if (vectors.empty()) throw std::invalid_argument("rank_one_accumulate: empty vector set");
    if (y.size() != static_cast<Eigen::Index>(vectors.size()))
        throw std::invalid_argument("rank_one_accumulate: coefficient count mismatch");
    const Eigen::Index n = vectors.front().size();
    Matrix m(n, n);
    loop(static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            Complex acc(0, 0);
            for (Eigen::Index j = 0; j < y.size(); ++j) {
                const Vector& a = vectors[static_cast<std::size_t>(j)];
                acc += y(j) * a(r) * std::conj(a(c));
            }
            m(r, c) = acc;
        }
    });
    return m;
}

}  // namespace

Matrix tensor_power_columns(const std::vector<Vector>& vectors, int t) {
    return tensor_power_columns_impl(vectors, t, [](auto n, auto&& f) { parallel_for_index(n, f); });
}
Matrix tensor_power_columns_serial(const std::vector<Vector>& vectors, int t) {
    return tensor_power_columns_impl(vectors, t, [](auto n, auto&& f) { serial_for_index(n, f); });
}

Matrix weighted_gram(const Matrix& cols, const std::vector<double>& weights) {
    return weighted_gram_impl(cols, weights, [](auto n, auto&& f) { parallel_for_index(n, f); });
}
Matrix weighted_gram_serial(const Matrix& cols, const std::vector<double>& weights) {
    return weighted_gram_impl(cols, weights, [](auto n, auto&& f) { serial_for_index(n, f); });
}

Vector weighted_gram_apply(const Matrix& cols, const std::vector<double>& weights, const Vector& v) {
    return weighted_gram_apply_impl(cols, weights, v,
                                    [](auto n, auto&& f) { parallel_for_index(n, f); });
}
Vector weighted_gram_apply_serial(const Matrix& cols, const std::vector<double>& weights,
                                  const Vector& v) {
    return weighted_gram_apply_impl(cols, weights, v,
                                    [](auto n, auto&& f) { serial_for_index(n, f); });
}

RealVector quadratic_forms(const std::vector<Vector>& vectors, const Matrix& z) {
    return quadratic_forms_impl(vectors, z, [](auto n, auto&& f) { parallel_for_index(n, f); });
}
RealVector quadratic_forms_serial(const std::vector<Vector>& vectors, const Matrix& z) {
    return quadratic_forms_impl(vectors, z, [](auto n, auto&& f) { serial_for_index(n, f); });
}

Matrix rank_one_accumulate(const std::vector<Vector>& vectors, const RealVector& y) {
    return rank_one_accumulate_impl(vectors, y, [](auto n, auto&& f) { parallel_for_index(n, f); });
}
Matrix rank_one_accumulate_serial(const std::vector<Vector>& vectors, const RealVector& y) {
    return rank_one_accumulate_impl(vectors, y, [](auto n, auto&& f) { serial_for_index(n, f); });
}

}  // namespace designlift::kernels
