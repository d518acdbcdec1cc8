#pragma once

#include <functional>
#include <string>
#include <vector>

#include "designlift/measurement.hpp"

namespace designlift {

struct SolverConfig {
    int max_iterations = 5000;
    double primal_tolerance = 1e-7;
    double dual_tolerance = 1e-7;
    double penalty = 1.0;        // dual/primal step ratio; adapted by residual balancing
    double over_relaxation = 1.0;  // in [1, 1.9]
};

struct IterationInfo {
    int iteration = 0;
    double objective = 0.0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double max_asymmetry = 0.0;
};

using ProgressCallback = std::function<void(const IterationInfo&)>;

struct RecoveryResult {
    HermitianMatrix solution;
    double objective = 0.0;
    double feasibility_residual = 0.0;  // ||A(X)-b||_q - eta, clamped at 0
    int iterations = 0;
    bool converged = false;
    std::vector<double> primal_history;
    std::vector<double> dual_history;
    std::vector<double> objective_history;
};

// Projection of v onto the lq ball of the given radius around center.
// Closed form for q in {2, inf}; exact sorted-prefix projection for q = 1.
RealVector project_lq_ball(const RealVector& v, const RealVector& center, double radius,
                           NoiseNorm q);

// Operator norm ||A|| estimated by power iteration on A* A; deterministic.
double operator_norm_estimate(const MeasurementEnsemble& e, int iterations = 80);

// Nuclear-norm minimization over Hermitian matrices subject to
// ||A(Z) - b||_q <= eta, by primal-dual splitting: eigenvalue
// soft-thresholding, lq-ball projection of the measurements, dual update on
// the linear coupling. Deterministic; single solve runs sequentially.
RecoveryResult recover(const RecoveryProblem& p, const SolverConfig& cfg = {},
                       const ProgressCallback& progress = nullptr);

// Same program restricted to the PSD cone (PhaseLift): the spectral proximal
// step thresholds and clamps negative eigenvalues.
RecoveryResult recover_psd(const RecoveryProblem& p, const SolverConfig& cfg = {},
                           const ProgressCallback& progress = nullptr);

struct CrosscheckResult {
    double objective = 0.0;
    bool feasible_found = false;
    bool budget_exhausted = false;
    int iterations = 0;
};

// Independent low-accuracy check: switching projected-subgradient descent on
// the same program (q = 2 only). Returns the best objective seen at a
// feasible iterate; never beats the splitting solver beyond tolerance.
CrosscheckResult subgradient_crosscheck(const RecoveryProblem& p, int budget = 4000);

struct DiagnosticsReport {
    double feasibility_residual = 0.0;
    double objective = 0.0;
    int rank = 0;  // eigenvalues above 1e-6 * ||X||_inf
    int iterations = 0;
    bool converged = false;
    std::vector<double> primal_history;
    std::vector<double> dual_history;
};

DiagnosticsReport diagnostics(const RecoveryResult& r, const RecoveryProblem& p);
std::string format_diagnostics(const DiagnosticsReport& rep);

}  // namespace designlift
