#include "designlift/measurement.hpp"

#include <cmath>
#include <stdexcept>

#include "designlift/kernels.hpp"

namespace designlift {

double lq_norm(const RealVector& v, NoiseNorm q) {
    switch (q) {
        case NoiseNorm::l1:
            return v.lpNorm<1>();
        case NoiseNorm::l2:
            return v.norm();
        case NoiseNorm::linf:
            return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
    }
    return 0.0;
}

namespace {

double measurement_scaling(int n) { return std::sqrt(static_cast<double>(n) * (n + 1.0)); }

}  // namespace

MeasurementEnsemble sample_ensemble(const Design& d, int m, std::uint64_t seed) {
    validate_design(d);
    if (d.normalization != DesignNormalization::unit)
        throw std::invalid_argument("sample_ensemble: requires a unit-mode design");
    if (m < 1) throw std::invalid_argument("sample_ensemble: need at least one measurement");

    std::vector<double> cdf(d.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        acc += d.weights[i];
        cdf[i] = acc;
    }
    cdf.back() = 1.0;

    Rng rng(seed);
    MeasurementEnsemble e;
    e.dim = d.dim;
    e.scaling = measurement_scaling(d.dim);
    e.seed = seed;
    e.vectors.reserve(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) e.vectors.push_back(d.vectors[rng.sample_cdf(cdf)]);
    return e;
}

MeasurementEnsemble sample_ensemble_sphere(int n, int m, std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("sample_ensemble: need at least one measurement");
    SphereSampler sampler(n, seed);
    MeasurementEnsemble e;
    e.dim = n;
    e.scaling = measurement_scaling(n);
    e.seed = seed;
    e.vectors.reserve(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) e.vectors.push_back(sampler.next());
    return e;
}

MeasurementEnsemble ensemble_from_vectors(std::vector<Vector> vectors, std::uint64_t seed) {
    if (vectors.empty()) throw std::invalid_argument("ensemble: empty vector set");
    const int n = static_cast<int>(vectors.front().size());
    for (std::size_t j = 0; j < vectors.size(); ++j) {
        if (vectors[j].size() != n) throw std::invalid_argument("ensemble: mixed dimensions");
        if (std::abs(vectors[j].norm() - 1.0) > 1e-10)
            throw std::invalid_argument("ensemble: vector " + std::to_string(j) + " not unit norm");
    }
    MeasurementEnsemble e;
    e.dim = n;
    e.scaling = measurement_scaling(n);
    e.seed = seed;
    e.vectors = std::move(vectors);
    return e;
}

RealVector apply_operator(const MeasurementEnsemble& e, const HermitianMatrix& z) {
    if (z.dim() != e.dim) throw std::invalid_argument("apply_operator: dimension mismatch");
    return e.scaling * kernels::quadratic_forms(e.vectors, z.m);
}

HermitianMatrix adjoint_operator(const MeasurementEnsemble& e, const RealVector& y) {
    if (y.size() != static_cast<Eigen::Index>(e.count()))
        throw std::invalid_argument("adjoint_operator: observation length mismatch");
    return HermitianMatrix::symmetrized(e.scaling * kernels::rank_one_accumulate(e.vectors, y));
}

RecoveryProblem simulate_measurements(const MeasurementEnsemble& e, const HermitianMatrix& x,
                                      double eta, NoiseNorm q, NoiseShape shape,
                                      std::uint64_t seed) {
    if (eta < 0.0) throw std::invalid_argument("simulate_measurements: negative noise budget");
    RecoveryProblem p;
    p.ensemble = e;
    p.noise_budget = eta;
    p.noise_exponent = q;
    p.observations = apply_operator(e, x);
    if (eta > 0.0) {
        const Eigen::Index m = p.observations.size();
        RealVector eps(m);
        Rng rng(seed);
        if (shape == NoiseShape::adversarial_uniform) {
            for (Eigen::Index j = 0; j < m; ++j) eps(j) = rng.uniform() < 0.5 ? -1.0 : 1.0;
        } else {
            for (Eigen::Index j = 0; j < m; ++j) eps(j) = rng.normal();
        }
        const double nrm = lq_norm(eps, q);
        eps *= eta / nrm;
        p.observations += eps;
    }
    return p;
}

}  // namespace designlift
