// Acceptance suite: runs every release criterion end to end and prints one
// pass/fail line per criterion. Exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "designlift/experiment.hpp"
#include "designlift/io.hpp"
#include "designlift/parallel.hpp"
#include "designlift/symmetrizer.hpp"
#include "designlift/theory.hpp"
#include "test_oracles.hpp"
#include "test_util.hpp"

using namespace designlift;
using namespace designlift::testing;
using clock_type = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void run_criterion(int id, const std::string& name, double time_budget_s,
                   const std::function<Outcome()>& body) {
    const auto t0 = clock_type::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(clock_type::now() - t0).count();
    if (time_budget_s > 0.0 && secs > time_budget_s) {
        out.pass = false;
        out.detail += (out.detail.empty() ? "" : "; ") + std::string("over time budget");
    }
    if (!out.pass) ++failures;
    std::printf("[%2d] %s  (%6.2f s)  %s%s%s\n", id, out.pass ? "PASS" : "FAIL", secs,
                name.c_str(), out.detail.empty() ? "" : " -- ", out.detail.c_str());
    std::fflush(stdout);
}

double sym3_oracle(const HermitianMatrix& x, const HermitianMatrix& y, const HermitianMatrix& z) {
    const int n = static_cast<int>(x.dim());
    const Matrix k = kron(kron(x.m, y.m), z.m);
    const SymmetrizerProjector p(n, 3, /*build_dense=*/true);
    return (*p.dense() * k).trace().real();
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

Outcome criterion_sym3_trace() {
    Rng rng(101);
    double worst = 0.0;
    for (int n = 2; n <= 5; ++n)
        for (int rep = 0; rep < 100; ++rep) {
            const HermitianMatrix x = random_hermitian(n, rng);
            const HermitianMatrix y = random_hermitian(n, rng);
            const HermitianMatrix z = random_hermitian(n, rng);
            worst = std::max(worst, std::abs(sym3_trace(x, y, z) - sym3_oracle(x, y, z)));
        }
    return {worst <= 1e-8, "max |closed form - Kronecker oracle| = " + fmt(worst)};
}

Outcome criterion_design_certification() {
    std::ostringstream detail;
    bool pass = true;
    for (int k = 1; k <= 3; ++k) {
        const Design d = stabilizer_design(k);
        for (int t = 1; t <= 3; ++t) {
            const AccuracyMethod method = (k == 3 && t == 3) ? AccuracyMethod::power_iteration
                                                             : AccuracyMethod::dense;
            const double theta = design_accuracy(d, t, SchattenNorm::op, method);
            if (theta > 1e-9) {
                pass = false;
                detail << "k=" << k << " t=" << t << " theta=" << fmt(theta) << " ";
            }
        }
    }
    const double theta4 = design_accuracy(stabilizer_design(1), 4, SchattenNorm::op);
    if (theta4 <= 1e-3) {
        pass = false;
        detail << "t=4 theta=" << fmt(theta4) << " not > 1e-3";
    } else {
        detail << "all theta_inf(t<=3) <= 1e-9; stabilizer(1) theta_inf(t=4) = " << fmt(theta4);
    }
    return {pass, detail.str()};
}

Outcome criterion_second_moment() {
    double worst = 0.0;
    for (int k = 1; k <= 3; ++k) {
        const Design d = stabilizer_design(k);
        Rng rng(300 + k);
        for (int rep = 0; rep < 50; ++rep) {
            const HermitianMatrix z = random_unit_hermitian(d.dim, rng);
            const double tr = z.trace();
            const double expected = tr * tr + 1.0;
            worst = std::max(worst, std::abs(exact_moment(d, z, 2) - expected));
        }
    }
    return {worst <= 1e-9, "max |moment - (tr^2 + tr Z^2)| = " + fmt(worst)};
}

struct ConeBattery {
    std::vector<ConeSample> samples;
    int r;
    double rho;
};

std::vector<ConeBattery> cone_batteries() {
    std::vector<ConeBattery> batteries;
    std::uint64_t seed = 40000;
    for (int r : {1, 2})
        for (double rho : {0.3, 0.5, 0.8}) {
            ConeBattery b;
            b.r = r;
            b.rho = rho;
            for (int i = 0; i < 200; ++i) b.samples.push_back(sample_cone(8, r, rho, seed++));
            batteries.push_back(std::move(b));
        }
    return batteries;
}

Outcome criterion_lemma1(const Design& d3, const std::vector<ConeBattery>& batteries) {
    int violations = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    for (const ConeBattery& b : batteries)
        for (int tg = 0; tg <= 9; ++tg) {
            const LemmaReport rep = lemma1_bound_check(d3, b.samples, 0.1 * tg);
            violations += rep.violations;
            min_slack = std::min(min_slack, rep.min_slack);
        }
    return {violations == 0,
            "violations = " + std::to_string(violations) + ", min slack = " + fmt(min_slack)};
}

Outcome criterion_third_moment(const Design& d3, const std::vector<ConeBattery>& batteries) {
    int violations = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    for (const ConeBattery& b : batteries)
        for (const ConeSample& s : b.samples) {
            const BoundCheck bc = third_moment_bound_check(d3, s);
            if (!bc.pass) ++violations;
            min_slack = std::min(min_slack, bc.slack);
        }
    return {violations == 0,
            "violations = " + std::to_string(violations) + ", min slack = " + fmt(min_slack)};
}

Outcome criterion_paley_zygmund() {
    Rng rng(500);
    int checked = 0, violations = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        const int support = 2 + static_cast<int>(rng.uniform_int(63));
        std::vector<std::pair<double, double>> dist;
        double total = 0.0;
        for (int i = 0; i < support; ++i) {
            const double w = rng.uniform() + 1e-12;
            total += w;
            dist.emplace_back(w, 10.0 * rng.uniform());
        }
        for (auto& [w, v] : dist) w /= total;
        for (double p : {1.5, 2.0, 3.0})
            for (double theta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
                ++checked;
                if (!paley_zygmund_check(dist, p, theta).pass) ++violations;
            }
    }
    return {violations == 0, std::to_string(checked) + " checks, " +
                                 std::to_string(violations) + " violations (tol 1e-12)"};
}

Outcome criterion_wm(const Design& d3) {
    std::ostringstream detail;
    bool pass = true;
    for (int m : {50, 200}) {
        const WmReport rep = wm_estimate(d3, m, 500, 7000 + m, 1, 0.5);
        detail << "m=" << m << ": mean " << fmt(rep.h_norm_mean) << " vs bound "
               << fmt(rep.proof_bound) << " + 2SE " << fmt(2 * rep.h_norm_se) << "; ";
        if (!rep.within_proof_bound) pass = false;
    }
    return {pass, detail.str()};
}

Outcome criterion_solver_oracle() {
    // 20 distinct informationally complete instances: Haar rotations of the
    // tomography frame (rotation preserves the operator spectrum, so sigma_min
    // stays bounded away from zero) with fresh rank-one ground truths
    const std::vector<Vector> frame = tomography_basis(4);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        Rng rng(mix_seed(800, trial));
        const Matrix u = haar_unitary(4, rng);
        std::vector<Vector> rotated;
        for (const Vector& a : frame) rotated.push_back(u * a);
        const MeasurementEnsemble e = ensemble_from_vectors(std::move(rotated));
        if (operator_min_singular_value(e) <= 0.3)
            return {false, "instance " + std::to_string(trial) + " not informationally complete"};
        const HermitianMatrix x = random_rank_r(4, 1, false, rng);
        const RecoveryProblem p =
            simulate_measurements(e, x, 0.0, NoiseNorm::l2, NoiseShape::gaussian_rescaled, 1);
        const RecoveryResult res = recover(p);
        const HermitianMatrix oracle = linear_system_oracle(e, p.observations);
        const double err = (res.solution.m - oracle.m).norm() / oracle.frobenius();
        worst = std::max(worst, std::max(err, (res.solution.m - x.m).norm() / x.frobenius()));
    }
    return {worst <= 1e-4, "max relative error vs oracle and ground truth = " + fmt(worst)};
}

Outcome criterion_phase_behavior() {
    ExperimentConfig cfg = parse_config(
        "design stabilizer 3\nn 8\nr 1\n"
        "m 12\nm 24\nm 48\nm 96\nm 144\nm 192\n"
        "trials 20\nseed 4242\n");
    const ExperimentResult res = run_phase_diagram(cfg);
    std::ostringstream detail;
    detail << "success by m:";
    double at12 = 1.0, at144 = 0.0;
    bool monotone = true;
    double prev = -1.0;
    int inversions = 0;
    for (const CellResult& c : res.cells) {
        detail << " " << c.m << ":" << c.success_rate;
        if (c.m == 12) at12 = c.success_rate;
        if (c.m == 144) at144 = c.success_rate;
        if (prev >= 0.0 && c.success_rate < prev) {
            ++inversions;
            if (prev - c.success_rate > 0.1 || inversions > 1) monotone = false;
        }
        prev = std::max(prev, c.success_rate);
    }
    const bool pass = at144 >= 0.9 && at12 <= 0.1 && monotone;
    return {pass, detail.str()};
}

Outcome criterion_noise_robustness() {
    std::ostringstream config;
    config << "mode noise_sweep\ndesign stabilizer 3\nn 8\nr 1\nm 192\ntrials 10\nseed 777\n";
    for (int i = 0; i <= 10; ++i) config << "noise " << 0.01 * i << " 2\n";
    const ExperimentResult res = run_noise_sweep(parse_config(config.str()));

    // full least-squares line through the (eta, median error) points
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double count = static_cast<double>(res.cells.size());
    for (const CellResult& c : res.cells) {
        sx += c.eta;
        sy += c.median_rel_error;
        sxx += c.eta * c.eta;
        sxy += c.eta * c.median_rel_error;
    }
    const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / count;
    const bool pass =
        res.noise_correlation >= 0.99 && intercept <= res.noise_floor + 1e-3;
    std::ostringstream detail;
    detail << "correlation " << fmt(res.noise_correlation) << ", intercept " << fmt(intercept)
           << " vs floor " << fmt(res.noise_floor);
    return {pass, detail.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream is(path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

Outcome criterion_reproducibility() {
    const ExperimentConfig cfg = parse_config(
        "design stabilizer 2\nn 4\nr 1\nm 16\nm 32\ntrials 3\nseed 31337\nnoise 0.01 2\n");
    const std::string p1 = "acceptance_rep1.csv", p2 = "acceptance_rep2.csv",
                      p3 = "acceptance_rep3.csv";
    const int before = max_threads();
    set_threads(2);
    emit_report(run_phase_diagram(cfg), cfg, p1);
    emit_report(run_phase_diagram(cfg), cfg, p2);
    set_threads(1);
    emit_report(run_phase_diagram(cfg), cfg, p3);
    set_threads(before);
    const std::string a = slurp(p1), b = slurp(p2), c = slurp(p3);
    for (const std::string& p : {p1, p2, p3}) {
        std::remove(p.c_str());
        std::remove((p + ".quantiles.csv").c_str());
    }
    const bool rerun_identical = !a.empty() && a == b;
    const bool thread_identical = a == c;
    return {rerun_identical && thread_identical,
            std::string("rerun identical: ") + (rerun_identical ? "yes" : "no") +
                ", thread-count identical: " + (thread_identical ? "yes" : "no")};
}

}  // namespace

int main() {
    std::printf("acceptance suite (%d worker threads available)\n", max_threads());

    run_criterion(1, "symmetrizer trace formula vs dense Kronecker oracle", 10.0,
                  criterion_sym3_trace);
    run_criterion(2, "stabilizer designs certify as exact 3-designs (and fail at t=4)", 60.0,
                  criterion_design_certification);
    run_criterion(3, "second-moment identity on stabilizer designs", 0.0,
                  criterion_second_moment);

    const Design d3 = stabilizer_design(3);
    const auto batteries = cone_batteries();
    run_criterion(4, "lemma 1 small-ball lower bound over the cone battery", 0.0,
                  [&] { return criterion_lemma1(d3, batteries); });
    run_criterion(5, "third-moment upper bound over the cone battery", 0.0,
                  [&] { return criterion_third_moment(d3, batteries); });
    run_criterion(6, "Paley-Zygmund variant on random finite distributions", 0.0,
                  criterion_paley_zygmund);
    run_criterion(7, "Rademacher operator-norm bound (Monte Carlo, 500 trials)", 0.0,
                  [&] { return criterion_wm(d3); });
    run_criterion(8, "solver matches the exact linear-system oracle on IC instances", 30.0,
                  criterion_solver_oracle);
    run_criterion(9, "recovery phase behavior in m at n=8, r=1", 600.0,
                  criterion_phase_behavior);
    run_criterion(10, "noise robustness: linear error growth in eta", 0.0,
                  criterion_noise_robustness);
    run_criterion(11, "byte-identical reports across reruns and thread counts", 0.0,
                  criterion_reproducibility);

    std::printf("%s (%d/11 criteria passed)\n", failures == 0 ? "ALL PASS" : "FAILURES",
                11 - failures);
    return failures;
}
