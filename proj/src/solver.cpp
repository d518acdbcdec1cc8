#include "designlift/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "designlift/rng.hpp"

namespace designlift {

RealVector project_lq_ball(const RealVector& v, const RealVector& center, double radius,
                           NoiseNorm q) {
    if (radius < 0.0) throw std::invalid_argument("project_lq_ball: negative radius");
    RealVector u = v - center;
    switch (q) {
        case NoiseNorm::l2: {
            const double nrm = u.norm();
            if (nrm <= radius) return v;
            return center + u * (radius / nrm);
        }
        case NoiseNorm::linf: {
            RealVector out = u;
            for (Eigen::Index i = 0; i < out.size(); ++i)
                out(i) = std::clamp(out(i), -radius, radius);
            return center + out;
        }
        case NoiseNorm::l1: {
            if (u.lpNorm<1>() <= radius) return v;
            if (radius == 0.0) return center;
            // exact projection via the sorted-prefix threshold
            std::vector<double> mags(static_cast<std::size_t>(u.size()));
            for (Eigen::Index i = 0; i < u.size(); ++i)
                mags[static_cast<std::size_t>(i)] = std::abs(u(i));
            std::sort(mags.begin(), mags.end(), std::greater<>());
            double prefix = 0.0, threshold = 0.0;
            for (std::size_t j = 0; j < mags.size(); ++j) {
                prefix += mags[j];
                const double candidate = (prefix - radius) / static_cast<double>(j + 1);
                if (candidate < mags[j]) threshold = candidate;
            }
            RealVector out(u.size());
            for (Eigen::Index i = 0; i < u.size(); ++i) {
                const double mag = std::max(std::abs(u(i)) - threshold, 0.0);
                out(i) = (u(i) >= 0.0 ? 1.0 : -1.0) * mag;
            }
            return center + out;
        }
    }
    return v;
}

double operator_norm_estimate(const MeasurementEnsemble& e, int iterations) {
    Rng rng(0xA11CE5);
    Matrix z(e.dim, e.dim);
    for (Eigen::Index j = 0; j < z.cols(); ++j)
        for (Eigen::Index i = 0; i < z.rows(); ++i) z(i, j) = rng.cnormal();
    HermitianMatrix h = HermitianMatrix::symmetrized(z);
    double lambda = 0.0;
    for (int it = 0; it < iterations; ++it) {
        const RealVector y = apply_operator(e, h);
        const HermitianMatrix next = adjoint_operator(e, y);
        const double nrm = next.frobenius();
        if (nrm == 0.0) return 0.0;
        lambda = nrm / std::max(h.frobenius(), 1e-300);
        h = HermitianMatrix{next.m / nrm};
    }
    return std::sqrt(lambda);
}

namespace {

struct ProxOutcome {
    HermitianMatrix value;
    double nuclear = 0.0;
};

// prox of tau * ||.||_* (optionally restricted to the PSD cone), returning
// the nuclear norm of the result alongside it
ProxOutcome nuclear_prox(const HermitianMatrix& z, double tau, bool psd) {
    const SpectralDecomposition ed = eig_hermitian(z);
    RealVector lam = ed.eigenvalues;
    double nuclear = 0.0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        double s = (lam(i) >= 0.0 ? 1.0 : -1.0) * std::max(std::abs(lam(i)) - tau, 0.0);
        if (psd && s < 0.0) s = 0.0;
        lam(i) = s;
        nuclear += std::abs(s);
    }
    ProxOutcome out;
    out.value = HermitianMatrix::symmetrized(ed.eigenvectors * lam.asDiagonal() *
                                             ed.eigenvectors.adjoint());
    out.nuclear = nuclear;
    return out;
}

RecoveryResult run_splitting(const RecoveryProblem& p, const SolverConfig& cfg, bool psd,
                             const ProgressCallback& progress) {
    if (p.noise_budget < 0.0) throw std::invalid_argument("recover: negative noise budget");
    if (cfg.max_iterations < 1) throw std::invalid_argument("recover: max_iterations must be >= 1");
    if (cfg.primal_tolerance <= 0.0 || cfg.dual_tolerance <= 0.0)
        throw std::invalid_argument("recover: tolerances must be positive");
    if (cfg.over_relaxation < 1.0 || cfg.over_relaxation > 1.9)
        throw std::invalid_argument("recover: over_relaxation outside [1, 1.9]");
    if (cfg.penalty <= 0.0) throw std::invalid_argument("recover: penalty must be positive");
    const Eigen::Index m = p.observations.size();
    if (m != static_cast<Eigen::Index>(p.ensemble.count()))
        throw std::invalid_argument("recover: observation/ensemble size mismatch");

    const int n = p.ensemble.dim;
    const RealVector& b = p.observations;
    const double eta = p.noise_budget;
    const double scale = std::max(1.0, b.norm());

    const double opnorm = std::max(operator_norm_estimate(p.ensemble), 1e-12) * 1.01;
    double penalty = cfg.penalty;
    double sigma = 0.99 * penalty / opnorm;
    double tau = 0.99 / (penalty * opnorm);
    const double omega = cfg.over_relaxation;

    HermitianMatrix z = HermitianMatrix::zero(n);
    RealVector u = RealVector::Zero(m);
    RealVector az = RealVector::Zero(m);               // A(z)
    HermitianMatrix atu = HermitianMatrix::zero(n);    // A*(u)

    RecoveryResult res;
    res.solution = z;
    int adaptations = 0;

    for (int it = 1; it <= cfg.max_iterations; ++it) {
        ProxOutcome prox = nuclear_prox(HermitianMatrix{z.m - tau * atu.m}, tau, psd);
        const HermitianMatrix& zhat = prox.value;
        const RealVector azhat = apply_operator(p.ensemble, zhat);

        const RealVector v = u + sigma * (2.0 * azhat - az);
        const RealVector uhat = v - sigma * project_lq_ball(v / sigma, b, eta, p.noise_exponent);
        const HermitianMatrix atuhat = adjoint_operator(p.ensemble, uhat);

        const double primal_res =
            ((z.m - zhat.m) / tau - (atu.m - atuhat.m)).norm();
        const double dual_res = ((u - uhat) / sigma - (az - azhat)).norm();
        const double feas = std::max(0.0, lq_norm(azhat - b, p.noise_exponent) - eta);

        res.primal_history.push_back(primal_res);
        res.dual_history.push_back(dual_res);
        res.objective_history.push_back(prox.nuclear);
        res.iterations = it;
        res.solution = zhat;
        res.objective = prox.nuclear;
        res.feasibility_residual = feas;

        if (progress) {
            IterationInfo info;
            info.iteration = it;
            info.objective = prox.nuclear;
            info.primal_residual = primal_res;
            info.dual_residual = dual_res;
            info.max_asymmetry = max_asymmetry(zhat.m);
            progress(info);
        }

        if (primal_res <= cfg.primal_tolerance * scale && dual_res <= cfg.dual_tolerance * scale &&
            feas <= cfg.primal_tolerance * scale) {
            res.converged = true;
            break;
        }

        z.m += omega * (zhat.m - z.m);
        u += omega * (uhat - u);
        az += omega * (azhat - az);
        atu.m += omega * (atuhat.m - atu.m);

        // residual balancing keeps the two step sizes commensurate
        if (it % 25 == 0 && adaptations < 30) {
            double factor = 1.0;
            if (primal_res > 10.0 * dual_res)
                factor = 2.0;
            else if (dual_res > 10.0 * primal_res)
                factor = 0.5;
            if (factor != 1.0) {
                penalty *= factor;
                sigma = 0.99 * penalty / opnorm;
                tau = 0.99 / (penalty * opnorm);
                ++adaptations;
            }
        }
    }
    return res;
}

}  // namespace

RecoveryResult recover(const RecoveryProblem& p, const SolverConfig& cfg,
                       const ProgressCallback& progress) {
    return run_splitting(p, cfg, /*psd=*/false, progress);
}

RecoveryResult recover_psd(const RecoveryProblem& p, const SolverConfig& cfg,
                           const ProgressCallback& progress) {
    return run_splitting(p, cfg, /*psd=*/true, progress);
}

CrosscheckResult subgradient_crosscheck(const RecoveryProblem& p, int budget) {
    if (p.noise_exponent != NoiseNorm::l2)
        throw std::invalid_argument("subgradient_crosscheck: only q = 2 supported");
    const int n = p.ensemble.dim;
    const RealVector& b = p.observations;
    const double eta = p.noise_budget;
    const double feas_tol = 1e-6 * std::max(1.0, b.norm());

    HermitianMatrix z = HermitianMatrix::zero(n);
    CrosscheckResult res;
    res.objective = std::numeric_limits<double>::infinity();
    res.budget_exhausted = true;

    int objective_steps = 0;
    int last_improvement = 0;
    for (int it = 1; it <= budget; ++it) {
        res.iterations = it;
        const RealVector r = apply_operator(p.ensemble, z) - b;
        const double violation = r.norm() - eta;
        if (violation > feas_tol) {
            // Polyak step toward the feasible set
            const HermitianMatrix g = adjoint_operator(p.ensemble, r / r.norm());
            const double gn2 = g.m.squaredNorm();
            if (gn2 == 0.0) break;
            z.m -= (violation / gn2) * g.m;
        } else {
            const double nuc = schatten_norm(z, SchattenNorm::nuclear);
            res.feasible_found = true;
            if (nuc < res.objective - 1e-8 * std::max(1.0, res.objective)) last_improvement = it;
            res.objective = std::min(res.objective, nuc);
            if (it - last_improvement > 300) {
                res.budget_exhausted = false;  // objective stalled; call it done
                break;
            }
            // diminishing subgradient step on the objective
            const SpectralDecomposition ed = eig_hermitian(z);
            RealVector sgn(ed.eigenvalues.size());
            for (Eigen::Index i = 0; i < sgn.size(); ++i)
                sgn(i) = ed.eigenvalues(i) > 0.0 ? 1.0 : (ed.eigenvalues(i) < 0.0 ? -1.0 : 0.0);
            const Matrix g = ed.eigenvectors * sgn.asDiagonal() * ed.eigenvectors.adjoint();
            ++objective_steps;
            const double step = 0.05 * std::max(1.0, z.frobenius()) /
                                std::sqrt(static_cast<double>(objective_steps));
            z.m -= step * g;
            z = HermitianMatrix::symmetrized(z.m);
        }
    }
    return res;
}

DiagnosticsReport diagnostics(const RecoveryResult& r, const RecoveryProblem& p) {
    DiagnosticsReport rep;
    rep.objective = r.objective;
    rep.iterations = r.iterations;
    rep.converged = r.converged;
    rep.primal_history = r.primal_history;
    rep.dual_history = r.dual_history;
    rep.feasibility_residual =
        std::max(0.0, lq_norm(apply_operator(p.ensemble, r.solution) - p.observations,
                              p.noise_exponent) -
                          p.noise_budget);
    const SpectralDecomposition ed = eig_hermitian(r.solution);
    const double top = ed.eigenvalues.size() == 0 ? 0.0 : ed.eigenvalues.cwiseAbs().maxCoeff();
    const double cut = 1e-6 * top;
    int rank = 0;
    for (Eigen::Index i = 0; i < ed.eigenvalues.size(); ++i)
        if (top > 0.0 && std::abs(ed.eigenvalues(i)) > cut) ++rank;
    rep.rank = rank;
    return rep;
}

std::string format_diagnostics(const DiagnosticsReport& rep) {
    std::ostringstream os;
    os << "objective " << rep.objective << ", feasibility residual " << rep.feasibility_residual
       << ", rank " << rep.rank << ", iterations " << rep.iterations << ", converged "
       << (rep.converged ? "yes" : "no");
    return os.str();
}

}  // namespace designlift
