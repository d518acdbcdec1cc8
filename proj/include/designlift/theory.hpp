#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "designlift/design.hpp"
#include "designlift/measurement.hpp"

namespace designlift {

// Unit-Frobenius Hermitian matrix in the cone T_{rho,r}:
// ||Z_r||_F > (rho/sqrt(r)) ||Z_c||_*.
struct ConeSample {
    HermitianMatrix matrix;
    double rho = 0.0;
    int rank_param = 0;
    double margin = 0.0;  // ||Z_r||_F - (rho/sqrt(r)) ||Z_c||_*
    int attempts = 0;     // rejection-sampling draws consumed
};

// Rejection sampler for T_{rho,r}: Haar eigenvectors, Gaussian head/tail
// spectra mixed with the head_mass weight, normalized to unit Frobenius.
// Throws std::runtime_error when 1000 attempts all miss the cone.
ConeSample sample_cone(int n, int r, double rho, std::uint64_t seed, double head_mass = 0.9);

// sqrt(1 + (1 + 1/rho)^2), the convex-decomposition constant of T_{rho,r}.
double cone_constant(double rho);

// Exact weighted moment sum_i p_i |sqrt(n(n+1)) w_i^* Z w_i|^order over a
// finite unit-mode design (the super-normalized scaling is applied here).
double exact_moment(const Design& d, const HermitianMatrix& z, int order);

struct BoundCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    bool pass = false;
};

// Third absolute moment against 6 sqrt(1+(1+1/rho)^2) sqrt(r) max{1, tr(Z)^2}.
BoundCheck third_moment_bound_check(const Design& d, const ConeSample& z);

// P(|sqrt(n(n+1)) w^* Z w| >= theta) under the design's weights, exact.
double small_ball_exact(const Design& d, const HermitianMatrix& z, double theta);

struct LemmaRow {
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    bool pass = false;
};

struct LemmaReport {
    std::vector<LemmaRow> rows;
    int violations = 0;
    double min_slack = 0.0;
};

// Small-ball probability of each sample against (1-theta^2)^3 / (36 (1 +
// (1+1/rho)^2) r), the exact-3-design lower bound.
LemmaReport lemma1_bound_check(const Design& d, const std::vector<ConeSample>& samples,
                               double theta);

// Traceless rank-2r matrices with +-1/sqrt(2r) spectrum: the analytically
// worst obvious cone members, appended when estimating the infimum.
std::vector<ConeSample> worst_cone_candidates(int n, int r, double rho, std::uint64_t seed,
                                              int count = 8);

// Lower-envelope estimate of inf_Z Q_theta over the cone: the minimum
// small-ball probability across the drawn samples plus the worst obvious
// candidates. Pointwise sound; the infimum itself is only approached.
double small_ball_inf_estimate(const Design& d, const std::vector<ConeSample>& samples,
                               double theta);

// Approximate-design variant with denominator 450. Refuses to run unless the
// design certifies one of the two accuracy hypotheses and the frame
// condition; the exception names the failing quantity.
struct HypothesisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

LemmaReport lemma3_bound_check(const Design& d, const std::vector<ConeSample>& samples,
                               double theta, double rho, int r);

struct PzCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

// P(W > theta E W) >= (1-theta)^{p/(p-1)} (E W)^{p/(p-1)} / (E W^p)^{1/(p-1)}
// evaluated exactly on a finite distribution of (probability, value) pairs.
PzCheck paley_zygmund_check(const std::vector<std::pair<double, double>>& distribution, double p,
                            double theta);

struct WmReport {
    double h_norm_mean = 0.0;   // Monte-Carlo estimate of E ||H||_inf
    double h_norm_se = 0.0;     // standard error of the estimate
    double lemma2_rhs = 0.0;    // sqrt(1+(1+1/rho)^2) sqrt(r) * estimate
    double proof_bound = 0.0;   // 3.1049 sqrt(n log 2n)
    int trials = 0;
    bool within_proof_bound = false;  // mean <= proof bound + 2 SE
};

// E ||H||_inf for H = (1/sqrt(m)) sum_j eps_j A_j over `trials` joint draws
// of measurements and Rademacher signs. Trials run in parallel with
// per-trial seeded streams and a fixed-order reduction.
WmReport wm_estimate(const Design& d, int m, int trials, std::uint64_t seed, int r, double rho);

struct NspRow {
    double lhs = 0.0;  // ||Z_r||_F
    double rhs = 0.0;  // (rho/sqrt(r)) ||Z_c||_* + tau ||A(Z)||_q
    bool holds = false;
};

struct NspWitness {
    double rho = 0.0;
    double tau = 0.0;
    int order = 0;
    NoiseNorm q = NoiseNorm::l2;
    std::vector<NspRow> rows;
    int violations = 0;
};

// Falsification harness for the Frobenius-robust rank null space property:
// evaluates the defining inequality on each provided matrix.
NspWitness nsp_check(const MeasurementEnsemble& e, double rho, double tau, int r, NoiseNorm q,
                     const std::vector<HermitianMatrix>& samples);

}  // namespace designlift
