// designlift: build and certify projective designs, run nuclear-norm
// recovery, and drive the verification/experiment suites from the shell.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "designlift/experiment.hpp"
#include "designlift/io.hpp"
#include "designlift/parallel.hpp"
#include "designlift/symmetrizer.hpp"
#include "designlift/theory.hpp"

using namespace designlift;

namespace {

struct TheoryRow {
    std::string suite;
    std::string instance;
    double lhs, rhs, slack;
    bool pass;
};

void write_theory_report(const std::vector<TheoryRow>& rows, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open report '" + path + "' for writing");
    os << "suite,instance_id,lhs,rhs,slack,pass\n";
    for (const TheoryRow& r : rows)
        os << r.suite << ',' << r.instance << ',' << format_double(r.lhs) << ','
           << format_double(r.rhs) << ',' << format_double(r.slack) << ','
           << (r.pass ? "1" : "0") << '\n';
}

HermitianMatrix random_unit_hermitian(int n, Rng& rng) {
    Matrix a(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) a(i, j) = rng.cnormal();
    HermitianMatrix h = HermitianMatrix::symmetrized(a);
    h.m /= h.frobenius();
    return h;
}

void suite_moments(const Design& d, int samples, std::uint64_t seed, int r, double rho,
                   std::vector<TheoryRow>& rows) {
    Rng rng(mix_seed(seed, 1));
    for (int i = 0; i < samples; ++i) {
        const HermitianMatrix z = random_unit_hermitian(d.dim, rng);
        const double tr = z.trace();
        const double lhs = exact_moment(d, z, 2);
        const double rhs = tr * tr + 1.0;
        const double slack = -std::abs(lhs - rhs);
        rows.push_back({"moments", "m2-" + std::to_string(i), lhs, rhs, slack, slack >= -1e-9});
    }
    for (int i = 0; i < samples; ++i) {
        const ConeSample s = sample_cone(d.dim, r, rho, mix_seed(seed, 2, i));
        const BoundCheck bc = third_moment_bound_check(d, s);
        rows.push_back({"moments", "m3-" + std::to_string(i), bc.lhs, bc.rhs, bc.slack, bc.pass});
    }
}

void suite_smallball(const Design& d, int samples, std::uint64_t seed, int r, double rho,
                     std::vector<TheoryRow>& rows) {
    std::vector<ConeSample> cone;
    for (int i = 0; i < samples; ++i) cone.push_back(sample_cone(d.dim, r, rho, mix_seed(seed, 3, i)));
    for (int tgrid = 0; tgrid <= 9; ++tgrid) {
        const double theta = 0.1 * tgrid;
        const LemmaReport rep = lemma1_bound_check(d, cone, theta);
        for (std::size_t i = 0; i < rep.rows.size(); ++i) {
            const LemmaRow& lr = rep.rows[i];
            rows.push_back({"smallball",
                            "t" + std::to_string(tgrid) + "-" + std::to_string(i), lr.lhs, lr.rhs,
                            lr.slack, lr.pass});
        }
    }
}

void suite_pz(int samples, std::uint64_t seed, std::vector<TheoryRow>& rows) {
    Rng rng(mix_seed(seed, 4));
    int id = 0;
    for (int i = 0; i < samples; ++i) {
        const int support = 2 + static_cast<int>(rng.uniform_int(63));
        std::vector<std::pair<double, double>> dist;
        double total = 0.0;
        for (int k = 0; k < support; ++k) {
            const double w = rng.uniform() + 1e-12;
            total += w;
            dist.emplace_back(w, 10.0 * rng.uniform());
        }
        for (auto& [w, v] : dist) w /= total;
        for (double p : {1.5, 2.0, 3.0})
            for (double theta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
                const PzCheck pc = paley_zygmund_check(dist, p, theta);
                rows.push_back({"pz", std::to_string(id++), pc.lhs, pc.rhs, pc.lhs - pc.rhs,
                                pc.pass});
            }
    }
}

void suite_wm(const Design& d, const std::vector<int>& ms, int trials, std::uint64_t seed, int r,
              double rho, std::vector<TheoryRow>& rows) {
    for (int m : ms) {
        const WmReport rep = wm_estimate(d, m, trials, mix_seed(seed, 5, m), r, rho);
        const double rhs = rep.proof_bound + 2.0 * rep.h_norm_se;
        rows.push_back({"wm", "m" + std::to_string(m), rep.h_norm_mean, rhs,
                        rhs - rep.h_norm_mean, rep.within_proof_bound});
    }
}

void suite_nsp(const Design& d, int samples, std::uint64_t seed, int r, double rho, double tau,
               int m, std::vector<TheoryRow>& rows) {
    const MeasurementEnsemble e = sample_ensemble(d, m, mix_seed(seed, 6));
    std::vector<HermitianMatrix> test_set;
    Rng rng(mix_seed(seed, 7));
    for (int i = 0; i < samples / 2; ++i) test_set.push_back(random_unit_hermitian(d.dim, rng));
    for (int i = 0; i < samples - samples / 2; ++i)
        test_set.push_back(sample_cone(d.dim, r, rho, mix_seed(seed, 8, i)).matrix);
    const NspWitness w = nsp_check(e, rho, tau, r, NoiseNorm::l2, test_set);
    for (std::size_t i = 0; i < w.rows.size(); ++i)
        rows.push_back({"nsp", std::to_string(i), w.rows[i].lhs, w.rows[i].rhs,
                        w.rows[i].rhs - w.rows[i].lhs, w.rows[i].holds});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"low-rank recovery from projective 3-designs"};
    app.require_subcommand(1);

    // ---- design build / verify ----
    auto* design_cmd = app.add_subcommand("design", "construct and certify designs");
    design_cmd->require_subcommand(1);

    auto* build = design_cmd->add_subcommand("build", "construct a design and write it out");
    int build_k = 1;
    std::string build_out = "design.txt";
    build->add_option("--stabilizer", build_k, "qubit count for the stabilizer design")
        ->required();
    build->add_option("--out", build_out, "output design file");

    auto* verify = design_cmd->add_subcommand("verify", "certify t-design accuracy");
    std::string verify_file, verify_norm = "inf";
    int verify_t = 3;
    double verify_tol = 1e-9;
    bool force_dense = false, force_power = false;
    std::uint64_t verify_seed = 0x5eed;
    verify->add_option("--file", verify_file, "design file")->required();
    verify->add_option("--t", verify_t, "tensor power");
    verify->add_option("--norm", verify_norm, "accuracy norm: one or inf");
    verify->add_flag("--dense", force_dense, "force the dense path");
    verify->add_flag("--power", force_power, "force the matrix-free power iteration");
    verify->add_option("--tol", verify_tol, "acceptance threshold on theta");
    verify->add_option("--seed", verify_seed, "power-iteration start seed");

    // ---- measure ----
    auto* measure = app.add_subcommand("measure", "sample an ensemble and simulate observations");
    std::string measure_design, measure_matrix, out_ens = "ensemble.txt", out_obs = "obs.txt";
    int measure_sphere_n = 0, measure_m = 0;
    double measure_eta = 0.0;
    std::string measure_q = "2", measure_shape = "gaussian";
    std::uint64_t measure_seed = 1;
    measure->add_option("--design", measure_design, "design file to sample from");
    measure->add_option("--sphere", measure_sphere_n, "sample the complex sphere in dimension n");
    measure->add_option("--m", measure_m, "number of measurements")->required();
    measure->add_option("--matrix", measure_matrix, "ground-truth HMAT file")->required();
    measure->add_option("--eta", measure_eta, "noise budget");
    measure->add_option("--q", measure_q, "noise norm: 1, 2 or inf");
    measure->add_option("--shape", measure_shape, "noise shape: gaussian or adversarial");
    measure->add_option("--seed", measure_seed, "sampling seed");
    measure->add_option("--out-ensemble", out_ens, "ensemble output file");
    measure->add_option("--out-obs", out_obs, "observations output file");

    // ---- recover ----
    auto* rec = app.add_subcommand("recover", "nuclear-norm recovery from files");
    std::string rec_ens, rec_obs, rec_out = "solution.hmat";
    bool rec_psd = false;
    double rec_tol = 1e-7;
    int rec_maxit = 5000;
    rec->add_option("--ensemble", rec_ens, "ensemble file")->required();
    rec->add_option("--obs", rec_obs, "observations file")->required();
    rec->add_flag("--psd", rec_psd, "restrict to the PSD cone (PhaseLift)");
    rec->add_option("--tol", rec_tol, "primal/dual stopping tolerance");
    rec->add_option("--max-iter", rec_maxit, "iteration cap");
    rec->add_option("--out", rec_out, "solution HMAT file");

    // ---- verify-theory ----
    auto* vt = app.add_subcommand("verify-theory", "run the lemma-level numeric checks");
    std::string vt_design, vt_suite = "all", vt_report = "theory.csv";
    int vt_samples = 100, vt_r = 1, vt_m = 0, vt_trials = 500;
    double vt_rho = 0.5, vt_tau = 1.0;
    std::uint64_t vt_seed = 1;
    std::vector<int> vt_wm_ms = {50, 200};
    vt->add_option("--design", vt_design, "design file")->required();
    vt->add_option("--suite", vt_suite, "moments, smallball, pz, wm, nsp or all");
    vt->add_option("--samples", vt_samples, "sample count per suite");
    vt->add_option("--seed", vt_seed, "master seed");
    vt->add_option("--report", vt_report, "CSV report path");
    vt->add_option("--r", vt_r, "cone rank parameter");
    vt->add_option("--rho", vt_rho, "cone rho parameter");
    vt->add_option("--tau", vt_tau, "NSP tau");
    vt->add_option("--m", vt_m, "NSP measurement count (default n^2)");
    vt->add_option("--wm-m", vt_wm_ms, "measurement counts for the wm suite");
    vt->add_option("--wm-trials", vt_trials, "Monte-Carlo trials for the wm suite");

    // ---- experiment ----
    auto* exp = app.add_subcommand("experiment", "config-driven experiment harness");
    std::string exp_config, exp_out = "report.csv";
    int exp_threads = 0;
    exp->add_option("--config", exp_config, "experiment config file")->required();
    exp->add_option("--out", exp_out, "CSV report path");
    exp->add_option("--threads", exp_threads, "worker thread count (0 = library default)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed()) {
            const Design d = stabilizer_design(build_k);
            save_design(d, build_out);
            std::cout << "wrote " << d.size() << " states of dimension " << d.dim << " to "
                      << build_out << "\n";
            return 0;
        }

        if (verify->parsed()) {
            const Design d = load_design(verify_file);
            std::optional<AccuracyMethod> method;
            if (force_dense && force_power)
                throw std::invalid_argument("--dense and --power are mutually exclusive");
            if (force_dense) method = AccuracyMethod::dense;
            if (force_power) method = AccuracyMethod::power_iteration;
            const SchattenNorm norm = verify_norm == "one" ? SchattenNorm::nuclear
                                                            : SchattenNorm::op;
            if (verify_norm != "one" && verify_norm != "inf")
                throw std::invalid_argument("--norm must be one or inf");
            const double theta = design_accuracy(d, verify_t, norm, method, verify_seed);
            const double frame = frame_check(d);
            std::cout << "theta_" << verify_norm << "(t=" << verify_t << ") = "
                      << format_double(theta) << "\nframe deviation = " << format_double(frame)
                      << " (1/n = " << format_double(1.0 / d.dim) << ")\n";
            return theta <= verify_tol ? 0 : 1;
        }

        if (measure->parsed()) {
            if (measure_design.empty() == (measure_sphere_n == 0))
                throw std::invalid_argument("pass exactly one of --design or --sphere");
            const HermitianMatrix x = load_hmat(measure_matrix);
            MeasurementEnsemble e =
                measure_design.empty()
                    ? sample_ensemble_sphere(measure_sphere_n, measure_m, measure_seed)
                    : sample_ensemble(load_design(measure_design), measure_m, measure_seed);
            const NoiseNorm q = parse_noise_norm(measure_q);
            const NoiseShape shape = measure_shape == "adversarial"
                                         ? NoiseShape::adversarial_uniform
                                         : NoiseShape::gaussian_rescaled;
            const RecoveryProblem p =
                simulate_measurements(e, x, measure_eta, q, shape, mix_seed(measure_seed, 1));
            save_ensemble(e, out_ens);
            save_observations(p.observations, q, measure_eta, out_obs);
            std::cout << "wrote " << out_ens << " and " << out_obs << "\n";
            return 0;
        }

        if (rec->parsed()) {
            RecoveryProblem p;
            p.ensemble = load_ensemble(rec_ens);
            const Observations obs = load_observations(rec_obs);
            p.observations = obs.values;
            p.noise_budget = obs.eta;
            p.noise_exponent = obs.q;
            SolverConfig cfg;
            cfg.primal_tolerance = rec_tol;
            cfg.dual_tolerance = rec_tol;
            cfg.max_iterations = rec_maxit;
            const RecoveryResult res = rec_psd ? recover_psd(p, cfg) : recover(p, cfg);
            save_hmat(res.solution, rec_out);
            std::cout << format_diagnostics(diagnostics(res, p)) << "\n";
            return res.converged ? 0 : 1;
        }

        if (vt->parsed()) {
            const Design d = load_design(vt_design);
            std::vector<TheoryRow> rows;
            const bool all = vt_suite == "all";
            if (all || vt_suite == "moments")
                suite_moments(d, vt_samples, vt_seed, vt_r, vt_rho, rows);
            if (all || vt_suite == "smallball")
                suite_smallball(d, vt_samples, vt_seed, vt_r, vt_rho, rows);
            if (all || vt_suite == "pz") suite_pz(vt_samples, vt_seed, rows);
            if (all || vt_suite == "wm")
                suite_wm(d, vt_wm_ms, vt_trials, vt_seed, vt_r, vt_rho, rows);
            if (all || vt_suite == "nsp")
                suite_nsp(d, vt_samples, vt_seed, vt_r, vt_rho, vt_tau,
                          vt_m > 0 ? vt_m : d.dim * d.dim, rows);
            if (rows.empty()) throw std::invalid_argument("unknown suite '" + vt_suite + "'");
            write_theory_report(rows, vt_report);
            int failures = 0;
            for (const TheoryRow& r : rows)
                if (!r.pass) ++failures;
            std::cout << rows.size() << " checks, " << failures << " failures -> " << vt_report
                      << "\n";
            return failures == 0 ? 0 : 1;
        }

        if (exp->parsed()) {
            if (exp_threads > 0) set_threads(exp_threads);
            ExperimentConfig cfg = load_config(exp_config);
            if (const char* env_seed = std::getenv("DESIGNLIFT_SEED"))
                cfg.seed = std::stoull(env_seed);
            const ExperimentResult result = run_experiment(cfg);
            emit_report(result, cfg, exp_out);
            bool degraded = false;
            for (const CellResult& c : result.cells)
                if (2 * c.nonconverged >= c.trials) degraded = true;
            std::cout << result.cells.size() << " cells -> " << exp_out << "\n";
            if (result.has_noise_fit)
                std::cout << "noise fit: slope " << format_double(result.noise_slope)
                          << ", correlation " << format_double(result.noise_correlation)
                          << ", floor " << format_double(result.noise_floor) << "\n";
            return degraded ? 2 : 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
