#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "designlift/solver.hpp"

namespace designlift {

struct DesignSpec {
    enum class Kind { stabilizer, sphere, file } kind = Kind::stabilizer;
    int param = 1;     // qubit count (stabilizer) or dimension (sphere)
    std::string path;  // design file (file kind)

    std::string id() const;
};

enum class ExperimentMode { phase_diagram, noise_sweep, design_comparison };

struct ExperimentConfig {
    ExperimentMode mode = ExperimentMode::phase_diagram;
    std::vector<DesignSpec> designs;
    std::vector<int> ns, rs, ms;
    int trials = 20;
    std::vector<std::pair<double, NoiseNorm>> noise = {{0.0, NoiseNorm::l2}};
    NoiseShape noise_shape = NoiseShape::gaussian_rescaled;
    SolverConfig solver;
    std::uint64_t seed = 0;
    double success_threshold = 1e-3;
    bool psd = false;    // PhaseLift runs: PSD ground truth + PSD solver
    bool timing = false;  // measured wall_ms breaks byte reproducibility
};

// Flat key-value text; repeated keys build lists. See the README grammar.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string canonical_config(const ExperimentConfig& cfg);

struct CellResult {
    int n = 0, r = 0, m = 0;
    double eta = 0.0;
    NoiseNorm q = NoiseNorm::l2;
    std::string design_id;
    int trials = 0;
    double success_rate = 0.0;
    double median_rel_error = 0.0;
    double q25 = 0.0, q75 = 0.0;  // error quantiles for threshold sensitivity
    double mean_iters = 0.0;
    double wall_ms = 0.0;
    int nonconverged = 0;
};

struct ExperimentResult {
    std::vector<CellResult> cells;
    // noise-sweep fit: median error vs eta after subtracting the eta = 0 floor
    double noise_slope = 0.0;
    double noise_correlation = 0.0;
    double noise_floor = 0.0;
    bool has_noise_fit = false;
};

// Ground-truth draw used by the harness: Haar eigenvectors, unit-Frobenius
// Gaussian spectrum on the top-r block (absolute values in PSD mode).
HermitianMatrix random_rank_r(int n, int r, bool psd, Rng& rng);

ExperimentResult run_phase_diagram(const ExperimentConfig& cfg);
ExperimentResult run_noise_sweep(const ExperimentConfig& cfg);
ExperimentResult run_design_comparison(const ExperimentConfig& cfg);
ExperimentResult run_experiment(const ExperimentConfig& cfg);  // dispatch on cfg.mode

// CSV with fixed columns n,r,m,eta,q,design,trials,success_rate,
// median_rel_error,mean_iters,wall_ms and a manifest line carrying the master
// seed, config hash and artifact version. Also writes <path>.quantiles.csv
// with the 25/50/75 error quantiles per cell.
void emit_report(const ExperimentResult& result, const ExperimentConfig& cfg,
                 const std::string& path);

std::uint64_t config_hash(const ExperimentConfig& cfg);

inline constexpr const char* kArtifactVersion = "1.0.0";

}  // namespace designlift
