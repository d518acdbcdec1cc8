#include "designlift/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "designlift/io.hpp"
#include "designlift/parallel.hpp"
#include "designlift/rng.hpp"

namespace designlift {

std::string DesignSpec::id() const {
    switch (kind) {
        case Kind::stabilizer:
            return "stabilizer:" + std::to_string(param);
        case Kind::sphere:
            return "sphere";
        case Kind::file: {
            // strip directories so the id stays stable across machines
            const auto slash = path.find_last_of('/');
            return "file:" + (slash == std::string::npos ? path : path.substr(slash + 1));
        }
    }
    return "?";
}

namespace {

[[noreturn]] void config_fail(const std::string& what) {
    throw std::invalid_argument("experiment config: " + what);
}

int to_int(const std::string& s) {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) config_fail("bad integer '" + s + "'");
    return v;
}

double to_double(const std::string& s) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) config_fail("bad number '" + s + "'");
    return v;
}

bool to_bool(const std::string& s) {
    if (s == "on" || s == "true" || s == "1") return true;
    if (s == "off" || s == "false" || s == "0") return false;
    config_fail("bad flag '" + s + "' (expected on/off)");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    cfg.noise.clear();
    bool saw_trials = false;

    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        std::vector<std::string> args;
        std::string a;
        while (ls >> a) args.push_back(a);
        const auto need = [&](std::size_t count) {
            if (args.size() != count)
                config_fail("key '" + key + "' expects " + std::to_string(count) + " argument(s)");
        };

        if (key == "mode") {
            need(1);
            if (args[0] == "phase_diagram")
                cfg.mode = ExperimentMode::phase_diagram;
            else if (args[0] == "noise_sweep")
                cfg.mode = ExperimentMode::noise_sweep;
            else if (args[0] == "design_comparison")
                cfg.mode = ExperimentMode::design_comparison;
            else
                config_fail("unknown mode '" + args[0] + "'");
        } else if (key == "design") {
            if (args.empty()) config_fail("design needs a kind");
            DesignSpec spec;
            if (args[0] == "stabilizer") {
                need(2);
                spec.kind = DesignSpec::Kind::stabilizer;
                spec.param = to_int(args[1]);
            } else if (args[0] == "sphere") {
                need(1);
                spec.kind = DesignSpec::Kind::sphere;
            } else if (args[0] == "file") {
                need(2);
                spec.kind = DesignSpec::Kind::file;
                spec.path = args[1];
            } else {
                config_fail("unknown design kind '" + args[0] + "'");
            }
            cfg.designs.push_back(spec);
        } else if (key == "n") {
            need(1);
            cfg.ns.push_back(to_int(args[0]));
        } else if (key == "r") {
            need(1);
            cfg.rs.push_back(to_int(args[0]));
        } else if (key == "m") {
            need(1);
            cfg.ms.push_back(to_int(args[0]));
        } else if (key == "trials") {
            need(1);
            cfg.trials = to_int(args[0]);
            saw_trials = true;
        } else if (key == "noise") {
            need(2);
            cfg.noise.emplace_back(to_double(args[0]), parse_noise_norm(args[1]));
        } else if (key == "noise_shape") {
            need(1);
            if (args[0] == "gaussian")
                cfg.noise_shape = NoiseShape::gaussian_rescaled;
            else if (args[0] == "adversarial")
                cfg.noise_shape = NoiseShape::adversarial_uniform;
            else
                config_fail("unknown noise shape '" + args[0] + "'");
        } else if (key == "seed") {
            need(1);
            cfg.seed = std::stoull(args[0]);
        } else if (key == "success_threshold") {
            need(1);
            cfg.success_threshold = to_double(args[0]);
        } else if (key == "psd") {
            need(1);
            cfg.psd = to_bool(args[0]);
        } else if (key == "timing") {
            need(1);
            cfg.timing = to_bool(args[0]);
        } else if (key == "solver_max_iter") {
            need(1);
            cfg.solver.max_iterations = to_int(args[0]);
        } else if (key == "solver_primal_tol") {
            need(1);
            cfg.solver.primal_tolerance = to_double(args[0]);
        } else if (key == "solver_dual_tol") {
            need(1);
            cfg.solver.dual_tolerance = to_double(args[0]);
        } else if (key == "solver_penalty") {
            need(1);
            cfg.solver.penalty = to_double(args[0]);
        } else if (key == "solver_over_relaxation") {
            need(1);
            cfg.solver.over_relaxation = to_double(args[0]);
        } else {
            config_fail("unknown key '" + key + "'");
        }
    }
    if (cfg.noise.empty()) cfg.noise.emplace_back(0.0, NoiseNorm::l2);
    if (!saw_trials) cfg.trials = 20;
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config '" + path + "'");
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config(buf.str());
}

std::string canonical_config(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "mode ";
    switch (cfg.mode) {
        case ExperimentMode::phase_diagram:
            os << "phase_diagram";
            break;
        case ExperimentMode::noise_sweep:
            os << "noise_sweep";
            break;
        case ExperimentMode::design_comparison:
            os << "design_comparison";
            break;
    }
    os << '\n';
    for (const auto& d : cfg.designs) {
        os << "design ";
        switch (d.kind) {
            case DesignSpec::Kind::stabilizer:
                os << "stabilizer " << d.param;
                break;
            case DesignSpec::Kind::sphere:
                os << "sphere";
                break;
            case DesignSpec::Kind::file:
                os << "file " << d.path;
                break;
        }
        os << '\n';
    }
    for (int v : cfg.ns) os << "n " << v << '\n';
    for (int v : cfg.rs) os << "r " << v << '\n';
    for (int v : cfg.ms) os << "m " << v << '\n';
    os << "trials " << cfg.trials << '\n';
    for (const auto& [eta, q] : cfg.noise)
        os << "noise " << format_double(eta) << ' ' << noise_norm_token(q) << '\n';
    os << "noise_shape "
       << (cfg.noise_shape == NoiseShape::gaussian_rescaled ? "gaussian" : "adversarial") << '\n';
    os << "seed " << cfg.seed << '\n';
    os << "success_threshold " << format_double(cfg.success_threshold) << '\n';
    os << "psd " << (cfg.psd ? "on" : "off") << '\n';
    os << "solver_max_iter " << cfg.solver.max_iterations << '\n';
    os << "solver_primal_tol " << format_double(cfg.solver.primal_tolerance) << '\n';
    os << "solver_dual_tol " << format_double(cfg.solver.dual_tolerance) << '\n';
    os << "solver_penalty " << format_double(cfg.solver.penalty) << '\n';
    os << "solver_over_relaxation " << format_double(cfg.solver.over_relaxation) << '\n';
    return os.str();
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
    // FNV-1a over the canonical serialization
    const std::string text = canonical_config(cfg);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

HermitianMatrix random_rank_r(int n, int r, bool psd, Rng& rng) {
    const Matrix u = haar_unitary(n, rng);
    RealVector spectrum = RealVector::Zero(n);
    RealVector head(r);
    for (int i = 0; i < r; ++i) head(i) = rng.normal();
    head /= head.norm();
    for (int i = 0; i < r; ++i) spectrum(i) = psd ? std::abs(head(i)) : head(i);
    return HermitianMatrix::symmetrized(u * spectrum.asDiagonal() * u.adjoint());
}

namespace {

struct Cell {
    const DesignSpec* design;
    const Design* finite_design;  // null for sphere
    int n, r, m;
    double eta;
    NoiseNorm q;
};

struct TrialOutcome {
    double rel_error = 0.0;
    int iterations = 0;
    bool converged = false;
    double wall_ms = 0.0;
};

double quantile(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) return 0.0;
    if (sorted.size() == 1) return sorted.front();
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.designs.empty()) config_fail("at least one design is required");
    if (cfg.ns.empty() || cfg.rs.empty() || cfg.ms.empty())
        config_fail("grids n, r, m must each have at least one value");
    for (int v : cfg.ns)
        if (v < 1) config_fail("grid n values must be positive");
    for (int v : cfg.rs)
        if (v < 1) config_fail("grid r values must be positive");
    for (int v : cfg.ms)
        if (v < 1) config_fail("grid m values must be positive");
    if (cfg.trials < 1) config_fail("trials must be >= 1");
    if (cfg.success_threshold <= 0.0) config_fail("success_threshold must be positive");
    for (const auto& [eta, q] : cfg.noise)
        if (eta < 0.0) config_fail("noise budgets must be nonnegative");
    // reject bad solver settings here; the trial loop cannot propagate throws
    if (cfg.solver.max_iterations < 1) config_fail("solver_max_iter must be >= 1");
    if (cfg.solver.primal_tolerance <= 0.0 || cfg.solver.dual_tolerance <= 0.0)
        config_fail("solver tolerances must be positive");
    if (cfg.solver.penalty <= 0.0) config_fail("solver_penalty must be positive");
    if (cfg.solver.over_relaxation < 1.0 || cfg.solver.over_relaxation > 1.9)
        config_fail("solver_over_relaxation outside [1, 1.9]");
}

ExperimentResult run_cells(const ExperimentConfig& cfg) {
    validate(cfg);

    // finite designs are built once and shared read-only by all trials
    std::map<std::string, Design> finite;
    for (const auto& spec : cfg.designs) {
        if (spec.kind == DesignSpec::Kind::stabilizer)
            finite.emplace(spec.id(), stabilizer_design(spec.param));
        else if (spec.kind == DesignSpec::Kind::file)
            finite.emplace(spec.id(), load_design(spec.path));
    }

    std::vector<Cell> cells;
    for (const auto& spec : cfg.designs) {
        const Design* d = nullptr;
        if (spec.kind != DesignSpec::Kind::sphere) d = &finite.at(spec.id());
        for (int n : cfg.ns) {
            if (d && d->dim != n) {
                std::ostringstream os;
                os << "grid n=" << n << " incompatible with design " << spec.id() << " (dim "
                   << d->dim << ")";
                config_fail(os.str());
            }
            for (int r : cfg.rs) {
                if (r > n) config_fail("grid r exceeds n");
                for (int m : cfg.ms)
                    for (const auto& [eta, q] : cfg.noise)
                        cells.push_back(Cell{&spec, d, n, r, m, eta, q});
            }
        }
    }

    const int trials = cfg.trials;
    std::vector<std::vector<TrialOutcome>> outcomes(cells.size(),
                                                    std::vector<TrialOutcome>(trials));

    const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(cells.size()) * trials;
    parallel_for_tasks(total, [&](std::ptrdiff_t flat) {
        const std::size_t ci = static_cast<std::size_t>(flat) / trials;
        const int ti = static_cast<int>(flat % trials);
        const Cell& cell = cells[ci];

        const auto t0 = std::chrono::steady_clock::now();
        Rng trial_rng(mix_seed(cfg.seed, ci, static_cast<std::uint64_t>(ti)));
        const std::uint64_t ens_seed = trial_rng.next_u64();
        const std::uint64_t x_seed = trial_rng.next_u64();
        const std::uint64_t noise_seed = trial_rng.next_u64();

        const MeasurementEnsemble ensemble =
            cell.finite_design ? sample_ensemble(*cell.finite_design, cell.m, ens_seed)
                               : sample_ensemble_sphere(cell.n, cell.m, ens_seed);
        Rng x_rng(x_seed);
        const HermitianMatrix x = random_rank_r(cell.n, cell.r, cfg.psd, x_rng);
        const RecoveryProblem problem =
            simulate_measurements(ensemble, x, cell.eta, cell.q, cfg.noise_shape, noise_seed);
        const RecoveryResult res =
            cfg.psd ? recover_psd(problem, cfg.solver) : recover(problem, cfg.solver);

        TrialOutcome& out = outcomes[ci][static_cast<std::size_t>(ti)];
        out.rel_error = (res.solution.m - x.m).norm() / x.frobenius();
        out.iterations = res.iterations;
        out.converged = res.converged;
        if (cfg.timing) {
            const auto t1 = std::chrono::steady_clock::now();
            out.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        }
    });

    ExperimentResult result;
    result.cells.reserve(cells.size());
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        const Cell& cell = cells[ci];
        CellResult cr;
        cr.n = cell.n;
        cr.r = cell.r;
        cr.m = cell.m;
        cr.eta = cell.eta;
        cr.q = cell.q;
        cr.design_id = cell.design->id();
        cr.trials = trials;

        std::vector<double> errors;
        errors.reserve(static_cast<std::size_t>(trials));
        int successes = 0;
        double iter_sum = 0.0, wall = 0.0;
        for (const TrialOutcome& t : outcomes[ci]) {
            errors.push_back(t.rel_error);
            if (t.rel_error <= cfg.success_threshold) ++successes;
            iter_sum += t.iterations;
            wall += t.wall_ms;
            if (!t.converged) ++cr.nonconverged;
        }
        std::sort(errors.begin(), errors.end());
        cr.success_rate = static_cast<double>(successes) / trials;
        cr.q25 = quantile(errors, 0.25);
        cr.median_rel_error = quantile(errors, 0.5);
        cr.q75 = quantile(errors, 0.75);
        cr.mean_iters = iter_sum / trials;
        cr.wall_ms = wall;
        result.cells.push_back(std::move(cr));
    }
    return result;
}

}  // namespace

ExperimentResult run_phase_diagram(const ExperimentConfig& cfg) { return run_cells(cfg); }

ExperimentResult run_noise_sweep(const ExperimentConfig& cfg) {
    if (cfg.noise.size() < 5) config_fail("noise sweep needs at least 5 noise levels");
    const bool has_zero =
        std::any_of(cfg.noise.begin(), cfg.noise.end(), [](const auto& nq) { return nq.first == 0.0; });
    if (!has_zero) config_fail("noise sweep needs the eta = 0 level");
    for (const auto& [eta, q] : cfg.noise)
        if (q != cfg.noise.front().second) config_fail("noise sweep levels must share one q");
    if (cfg.ns.size() != 1 || cfg.rs.size() != 1 || cfg.ms.size() != 1 || cfg.designs.size() != 1)
        config_fail("noise sweep fixes one (design, n, r, m) cell");

    ExperimentResult result = run_cells(cfg);

    double floor = 0.0;
    for (const CellResult& c : result.cells)
        if (c.eta == 0.0) floor = c.median_rel_error;
    double sxy = 0.0, sxx = 0.0;
    double mean_eta = 0.0, mean_err = 0.0;
    for (const CellResult& c : result.cells) {
        mean_eta += c.eta;
        mean_err += c.median_rel_error;
        if (c.eta > 0.0) {
            sxy += c.eta * (c.median_rel_error - floor);
            sxx += c.eta * c.eta;
        }
    }
    mean_eta /= static_cast<double>(result.cells.size());
    mean_err /= static_cast<double>(result.cells.size());
    double cov = 0.0, var_eta = 0.0, var_err = 0.0;
    for (const CellResult& c : result.cells) {
        cov += (c.eta - mean_eta) * (c.median_rel_error - mean_err);
        var_eta += (c.eta - mean_eta) * (c.eta - mean_eta);
        var_err += (c.median_rel_error - mean_err) * (c.median_rel_error - mean_err);
    }
    result.noise_floor = floor;
    result.noise_slope = sxx > 0.0 ? sxy / sxx : 0.0;
    result.noise_correlation =
        var_eta > 0.0 && var_err > 0.0 ? cov / std::sqrt(var_eta * var_err) : 0.0;
    result.has_noise_fit = true;
    return result;
}

ExperimentResult run_design_comparison(const ExperimentConfig& cfg) {
    if (cfg.designs.size() < 2) config_fail("design comparison needs at least 2 designs");
    return run_cells(cfg);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    switch (cfg.mode) {
        case ExperimentMode::phase_diagram:
            return run_phase_diagram(cfg);
        case ExperimentMode::noise_sweep:
            return run_noise_sweep(cfg);
        case ExperimentMode::design_comparison:
            return run_design_comparison(cfg);
    }
    return run_phase_diagram(cfg);
}

void emit_report(const ExperimentResult& result, const ExperimentConfig& cfg,
                 const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open report '" + path + "' for writing");
    os << "n,r,m,eta,q,design,trials,success_rate,median_rel_error,mean_iters,wall_ms\n";
    os << "# manifest seed=" << cfg.seed << " config_hash=" << config_hash(cfg)
       << " version=" << kArtifactVersion << '\n';
    if (result.has_noise_fit)
        os << "# noise_fit slope=" << format_double(result.noise_slope)
           << " correlation=" << format_double(result.noise_correlation)
           << " floor=" << format_double(result.noise_floor) << '\n';
    for (const CellResult& c : result.cells) {
        os << c.n << ',' << c.r << ',' << c.m << ',' << format_double(c.eta) << ','
           << noise_norm_token(c.q) << ',' << c.design_id << ',' << c.trials << ','
           << format_double(c.success_rate) << ',' << format_double(c.median_rel_error) << ','
           << format_double(c.mean_iters) << ',' << format_double(c.wall_ms) << '\n';
    }
    if (!os) throw std::runtime_error("write failure on report '" + path + "'");

    std::ofstream qs(path + ".quantiles.csv");
    if (!qs) throw std::runtime_error("cannot open '" + path + ".quantiles.csv' for writing");
    qs << "n,r,m,eta,q,design,q25,q50,q75\n";
    for (const CellResult& c : result.cells) {
        qs << c.n << ',' << c.r << ',' << c.m << ',' << format_double(c.eta) << ','
           << noise_norm_token(c.q) << ',' << c.design_id << ',' << format_double(c.q25) << ','
           << format_double(c.median_rel_error) << ',' << format_double(c.q75) << '\n';
    }
}

}  // namespace designlift
