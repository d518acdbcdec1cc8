#include "designlift/design.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "designlift/kernels.hpp"
#include "designlift/symmetrizer.hpp"

namespace designlift {

void validate_design(const Design& d) {
    if (d.dim < 1) throw std::invalid_argument("design: dimension must be positive");
    if (d.vectors.empty()) throw std::invalid_argument("design: empty vector set");
    if (d.vectors.size() != d.weights.size())
        throw std::invalid_argument("design: vector/weight count mismatch");
    const double target =
        d.normalization == DesignNormalization::unit ? 1.0 : super_normalization_factor(d.dim);
    double wsum = 0.0;
    for (std::size_t i = 0; i < d.vectors.size(); ++i) {
        if (d.vectors[i].size() != d.dim) {
            std::ostringstream os;
            os << "design: vector " << i << " has dimension " << d.vectors[i].size()
               << ", expected " << d.dim;
            throw std::invalid_argument(os.str());
        }
        const double nrm = d.vectors[i].norm();
        if (std::abs(nrm - target) > 1e-10) {
            std::ostringstream os;
            os << "design: vector " << i << " has norm " << nrm << ", expected " << target;
            throw std::invalid_argument(os.str());
        }
        if (d.weights[i] < 0.0) {
            std::ostringstream os;
            os << "design: weight " << i << " is negative";
            throw std::invalid_argument(os.str());
        }
        wsum += d.weights[i];
    }
    if (std::abs(wsum - 1.0) > 1e-12) {
        std::ostringstream os;
        os << "design: weights sum to " << wsum << ", expected 1";
        throw std::invalid_argument(os.str());
    }
}

double super_normalization_factor(int n) {
    return std::pow(static_cast<double>(n) * (n + 1.0), 0.25);
}

Design super_normalize(const Design& d) {
    if (d.normalization == DesignNormalization::super_normalized)
        throw std::invalid_argument("super_normalize: design already super-normalized");
    Design out = d;
    const double factor = super_normalization_factor(d.dim);
    for (Vector& v : out.vectors) v *= factor;
    out.normalization = DesignNormalization::super_normalized;
    return out;
}

Vector SphereSampler::next() {
    Vector v(n_);
    for (int i = 0; i < n_; ++i) v(i) = rng_.cnormal();
    v /= v.norm();
    return v;
}

Matrix haar_unitary(int n, Rng& rng) {
    Matrix g(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) g(i, j) = rng.cnormal();
    Matrix q = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        Vector v = g.col(j);
        for (Eigen::Index i = 0; i < j; ++i) v -= q.col(i).dot(v) * q.col(i);
        q.col(j) = v / v.norm();
    }
    return q;
}

namespace {

void require_unit_mode(const Design& d, const char* what) {
    if (d.normalization != DesignNormalization::unit) {
        std::ostringstream os;
        os << what << ": requires a unit-mode design";
        throw std::invalid_argument(os.str());
    }
}

Eigen::Index ipow(int n, int t) {
    Eigen::Index v = 1;
    for (int i = 0; i < t; ++i) v *= n;
    return v;
}

struct PowerResult {
    double value = 0.0;  // largest eigenvalue of Delta^2
    bool converged = false;
    double residual = 0.0;
    int iterations = 0;
};

// Power iteration on Delta^2 with Delta applied matrix-free. Delta is
// Hermitian, so iterating its square sidesteps sign flips from +-pairs.
PowerResult power_accuracy(const Design& d, int t, std::uint64_t seed) {
    const Eigen::Index rows = ipow(d.dim, t);
    const Matrix cols = kernels::tensor_power_columns(d.vectors, t);
    const SymmetrizerProjector sym(d.dim, t, /*build_dense=*/false);
    const double inv_dim = 1.0 / sym_subspace_dim(d.dim, t);

    const auto apply_delta = [&](const Vector& v) -> Vector {
        return kernels::weighted_gram_apply(cols, d.weights, v) - inv_dim * sym.apply(v);
    };

    Rng rng(seed);
    Vector v(rows);
    for (Eigen::Index i = 0; i < rows; ++i) v(i) = rng.cnormal();
    v /= v.norm();

    PowerResult out;
    double prev = -1.0;
    constexpr int kMaxIter = 500;
    constexpr double kZeroFloor = 1e-26;
    for (int it = 0; it < kMaxIter; ++it) {
        const Vector dv = apply_delta(v);
        const double q = dv.squaredNorm();  // Rayleigh quotient of Delta^2
        out.iterations = it + 1;
        if (q < kZeroFloor) {
            out.value = q;
            out.converged = true;
            return out;
        }
        out.residual = std::abs(q - prev) / q;
        if (prev >= 0.0 && out.residual < 1e-9) {
            out.value = q;
            out.converged = true;
            return out;
        }
        prev = q;
        Vector w = apply_delta(dv);
        const double wn = w.norm();
        if (wn == 0.0) {
            out.value = 0.0;
            out.converged = true;
            return out;
        }
        v = w / wn;
        out.value = q;
    }
    return out;
}

}  // namespace

Matrix moment_deviation_dense(const Design& d, int t) {
    const Eigen::Index rows = ipow(d.dim, t);
    if (rows > kDenseSymBudget)
        throw std::length_error(
            "design_accuracy: dense path over budget (n^t > 4096); use power iteration");
    const Matrix cols = kernels::tensor_power_columns(d.vectors, t);
    const Matrix moment = kernels::weighted_gram(cols, d.weights);
    const SymmetrizerProjector sym(d.dim, t, /*build_dense=*/true);
    return moment - (1.0 / sym_subspace_dim(d.dim, t)) * (*sym.dense());
}

double design_accuracy(const Design& d, int t, SchattenNorm norm,
                       std::optional<AccuracyMethod> method, std::uint64_t power_seed) {
    validate_design(d);
    require_unit_mode(d, "design_accuracy");
    if (t < 1 || t > 4) throw std::invalid_argument("design_accuracy: t must be in {1,2,3,4}");
    if (norm == SchattenNorm::frobenius)
        throw std::invalid_argument("design_accuracy: accuracy norm is nuclear (one) or operator (inf)");

    const Eigen::Index rows = ipow(d.dim, t);
    const double dim_factor = sym_subspace_dim(d.dim, t);
    AccuracyMethod chosen = method.value_or(rows <= kDenseSymBudget ? AccuracyMethod::dense
                                                                    : AccuracyMethod::power_iteration);
    if (norm == SchattenNorm::nuclear && chosen != AccuracyMethod::dense)
        throw std::invalid_argument("design_accuracy: nuclear accuracy requires the dense path");

    if (chosen == AccuracyMethod::dense) {
        const Matrix delta = moment_deviation_dense(d, t);
        const HermitianMatrix h = HermitianMatrix::symmetrized(delta);
        return dim_factor * schatten_norm(h, norm == SchattenNorm::nuclear ? SchattenNorm::nuclear
                                                                           : SchattenNorm::op);
    }

    const PowerResult pr = power_accuracy(d, t, power_seed);
    if (!pr.converged) {
        std::ostringstream os;
        os << "design_accuracy: power iteration did not converge after " << pr.iterations
           << " iterations, last relative residual " << pr.residual;
        throw std::runtime_error(os.str());
    }
    return dim_factor * std::sqrt(std::max(pr.value, 0.0));
}

double frame_check(const Design& d) {
    validate_design(d);
    require_unit_mode(d, "frame_check");
    Matrix frame = Matrix::Zero(d.dim, d.dim);
    for (std::size_t i = 0; i < d.size(); ++i)
        frame += d.weights[i] * d.vectors[i] * d.vectors[i].adjoint();
    frame -= Matrix::Identity(d.dim, d.dim) / static_cast<double>(d.dim);
    return schatten_norm(HermitianMatrix::symmetrized(frame), SchattenNorm::op);
}

DesignCertificate certify_design(const Design& d, int t, std::optional<AccuracyMethod> method) {
    const Eigen::Index rows = ipow(d.dim, t);
    AccuracyMethod chosen = method.value_or(rows <= kDenseSymBudget ? AccuracyMethod::dense
                                                                    : AccuracyMethod::power_iteration);
    DesignCertificate cert;
    cert.t = t;
    cert.method = chosen;
    cert.theta_inf = design_accuracy(d, t, SchattenNorm::op, chosen);
    if (chosen == AccuracyMethod::dense)
        cert.theta_1 = design_accuracy(d, t, SchattenNorm::nuclear, chosen);
    cert.frame_deviation = frame_check(d);
    return cert;
}

}  // namespace designlift
