#pragma once

#include <cstdint>
#include <vector>

#include "designlift/design.hpp"
#include "designlift/hermitian.hpp"

namespace designlift {

enum class NoiseNorm { l1, l2, linf };

double lq_norm(const RealVector& v, NoiseNorm q);

// Sampled rank-one measurement frame a_1..a_m (unit vectors) together with
// the sqrt(n(n+1)) scaling that turns each a_j a_j^* into A_j.
struct MeasurementEnsemble {
    int dim = 0;
    std::vector<Vector> vectors;
    double scaling = 0.0;  // sqrt(n(n+1))
    std::uint64_t seed = 0;

    std::size_t count() const { return vectors.size(); }
};

// Draws m indices i.i.d. from the design's weights. Unit-mode designs only.
MeasurementEnsemble sample_ensemble(const Design& d, int m, std::uint64_t seed);

// Draws m Haar-uniform unit vectors from the complex sphere in C^n.
MeasurementEnsemble sample_ensemble_sphere(int n, int m, std::uint64_t seed);

// Ensemble from an explicit vector list (unit norms enforced within 1e-10).
MeasurementEnsemble ensemble_from_vectors(std::vector<Vector> vectors, std::uint64_t seed = 0);

// b_j = scaling * a_j^* Z a_j for j = 1..m.
RealVector apply_operator(const MeasurementEnsemble& e, const HermitianMatrix& z);

// scaling * sum_j y_j a_j a_j^*, the adjoint of apply_operator.
HermitianMatrix adjoint_operator(const MeasurementEnsemble& e, const RealVector& y);

enum class NoiseShape { adversarial_uniform, gaussian_rescaled };

struct RecoveryProblem {
    MeasurementEnsemble ensemble;
    RealVector observations;
    double noise_budget = 0.0;
    NoiseNorm noise_exponent = NoiseNorm::l2;
};

// b = A(X) + eps with eps rescaled to ||eps||_q = eta exactly (eps = 0 when
// eta = 0). adversarial_uniform uses deterministic +-1 signs before scaling.
RecoveryProblem simulate_measurements(const MeasurementEnsemble& e, const HermitianMatrix& x,
                                      double eta, NoiseNorm q, NoiseShape shape,
                                      std::uint64_t seed);

}  // namespace designlift
