#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "designlift/hermitian.hpp"
#include "designlift/rng.hpp"

namespace designlift {

enum class DesignNormalization { unit, super_normalized };

// Weighted set of vectors {p_i, w_i} on C^n. Unit mode keeps ||w_i|| = 1;
// super-normalized mode carries the (n(n+1))^{1/4} rescaling in the vectors.
struct Design {
    int dim = 0;
    std::vector<Vector> vectors;
    std::vector<double> weights;
    DesignNormalization normalization = DesignNormalization::unit;

    std::size_t size() const { return vectors.size(); }
};

// Checks norms (1e-10) and the weight simplex (1e-12); throws
// std::invalid_argument naming the first failing index.
void validate_design(const Design& d);

// Scale factor between unit and super-normalized vectors: (n(n+1))^{1/4}.
double super_normalization_factor(int n);

// Rescales a unit-mode design; throws if the design is already
// super-normalized (no silent double scaling).
Design super_normalize(const Design& d);

// Stream of Haar-uniform unit vectors on the complex sphere in C^n
// (normalized standard complex Gaussians). Deterministic per seed.
class SphereSampler {
  public:
    SphereSampler(int n, std::uint64_t seed) : n_(n), rng_(seed) {
        if (n < 1) throw std::invalid_argument("sphere_sampler: dimension must be positive");
    }
    Vector next();
    int dim() const { return n_; }

  private:
    int n_;
    Rng rng_;
};

// Haar-distributed unitary (Ginibre columns through modified Gram-Schmidt,
// which keeps the R diagonal real positive).
Matrix haar_unitary(int n, Rng& rng);

// All stabilizer states on k qubits (dimension 2^k) with uniform weights.
// These sets are exact complex projective 3-designs. Supported k: 1, 2, 3.
Design stabilizer_design(int k);

// 2^k * prod_{j=1..k} (2^j + 1), the stabilizer state count.
std::size_t stabilizer_state_count(int k);

enum class AccuracyMethod { dense, power_iteration };

// t-design accuracy theta_p = binom(n+t-1, t) * ||Delta||_p where Delta is
// the deviation of the weighted t-th moment operator from the normalized
// symmetrizer. Nuclear (p=1) accuracy requires the dense path; the operator
// norm (p=inf) is additionally available matrix-free through power iteration
// on Delta^2.
double design_accuracy(const Design& d, int t, SchattenNorm norm,
                       std::optional<AccuracyMethod> method = std::nullopt,
                       std::uint64_t power_seed = 0x5eed);

// ||sum_i p_i w_i w_i^* - id/n||_inf on a unit-mode design.
double frame_check(const Design& d);

struct DesignCertificate {
    int t = 0;
    std::optional<double> theta_1;  // dense path only
    double theta_inf = 0.0;
    double frame_deviation = 0.0;
    AccuracyMethod method = AccuracyMethod::dense;
};

DesignCertificate certify_design(const Design& d, int t,
                                 std::optional<AccuracyMethod> method = std::nullopt);

// Moment-operator deviation Delta at tensor power t as a dense matrix
// (subject to the symmetrizer budget). Exposed for tests and the dense
// accuracy path.
Matrix moment_deviation_dense(const Design& d, int t);

}  // namespace designlift
