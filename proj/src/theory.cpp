#include "designlift/theory.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "designlift/parallel.hpp"

namespace designlift {

double cone_constant(double rho) {
    const double c = 1.0 + 1.0 / rho;
    return std::sqrt(1.0 + c * c);
}

namespace {

double cone_margin(const HermitianMatrix& z, int r, double rho) {
    const auto [zr, zc] = rank_split(z, r);
    return zr.frobenius() -
           (rho / std::sqrt(static_cast<double>(r))) * schatten_norm(zc, SchattenNorm::nuclear);
}

void require_finite_design(const Design& d, const char* what) {
    validate_design(d);
    if (d.normalization != DesignNormalization::unit) {
        std::ostringstream os;
        os << what << ": requires a unit-mode design";
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

ConeSample sample_cone(int n, int r, double rho, std::uint64_t seed, double head_mass) {
    if (n < 1 || r < 1 || r > n) throw std::invalid_argument("sample_cone: invalid (n, r)");
    if (rho <= 0.0 || rho >= 1.0) throw std::invalid_argument("sample_cone: rho must be in (0,1)");
    if (head_mass <= 0.0 || head_mass > 1.0)
        throw std::invalid_argument("sample_cone: head_mass must be in (0,1]");

    Rng rng(seed);
    constexpr int kBudget = 1000;
    for (int attempt = 0; attempt < kBudget; ++attempt) {
        const Matrix u = haar_unitary(n, rng);
        RealVector spectrum = RealVector::Zero(n);
        RealVector head(r);
        for (int i = 0; i < r; ++i) head(i) = rng.normal();
        head *= head_mass / head.norm();
        for (int i = 0; i < r; ++i) spectrum(i) = head(i);
        if (r < n) {
            RealVector tail(n - r);
            for (int i = 0; i < n - r; ++i) tail(i) = rng.normal();
            if (head_mass < 1.0) {
                tail *= (1.0 - head_mass) / tail.norm();
                for (int i = 0; i < n - r; ++i) spectrum(r + i) = tail(i);
            }
        }
        Matrix zm = u * spectrum.asDiagonal() * u.adjoint();
        HermitianMatrix z = HermitianMatrix::symmetrized(zm / zm.norm());
        const double margin = cone_margin(z, r, rho);
        if (margin > 1e-8) {
            ConeSample out;
            out.matrix = std::move(z);
            out.rho = rho;
            out.rank_param = r;
            out.margin = margin;
            out.attempts = attempt + 1;
            return out;
        }
    }
    std::ostringstream os;
    os << "sample_cone: rejection budget exhausted after " << kBudget << " draws at (n=" << n
       << ", r=" << r << ", rho=" << rho << ")";
    throw std::runtime_error(os.str());
}

double exact_moment(const Design& d, const HermitianMatrix& z, int order) {
    require_finite_design(d, "exact_moment");
    if (order != 2 && order != 3) throw std::invalid_argument("exact_moment: order must be 2 or 3");
    if (z.dim() != d.dim) throw std::invalid_argument("exact_moment: dimension mismatch");
    const double scaling = std::sqrt(static_cast<double>(d.dim) * (d.dim + 1.0));
    const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(d.size());
    std::vector<double> terms(static_cast<std::size_t>(count));
    parallel_for_index(count, [&](std::ptrdiff_t i) {
        const Vector& w = d.vectors[static_cast<std::size_t>(i)];
        const double q = (w.adjoint() * z.m * w)(0).real() * scaling;
        terms[static_cast<std::size_t>(i)] =
            d.weights[static_cast<std::size_t>(i)] * std::pow(std::abs(q), order);
    });
    double sum = 0.0;
    for (double t : terms) sum += t;  // fixed-order reduction
    return sum;
}

BoundCheck third_moment_bound_check(const Design& d, const ConeSample& z) {
    BoundCheck out;
    out.lhs = exact_moment(d, z.matrix, 3);
    const double tr = z.matrix.trace();
    out.rhs = 6.0 * cone_constant(z.rho) * std::sqrt(static_cast<double>(z.rank_param)) *
              std::max(1.0, tr * tr);
    out.slack = out.rhs - out.lhs;
    out.pass = out.lhs <= out.rhs + 1e-9;
    return out;
}

double small_ball_exact(const Design& d, const HermitianMatrix& z, double theta) {
    require_finite_design(d, "small_ball_exact");
    if (z.dim() != d.dim) throw std::invalid_argument("small_ball_exact: dimension mismatch");
    const double scaling = std::sqrt(static_cast<double>(d.dim) * (d.dim + 1.0));
    const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(d.size());
    std::vector<double> terms(static_cast<std::size_t>(count), 0.0);
    parallel_for_index(count, [&](std::ptrdiff_t i) {
        const Vector& w = d.vectors[static_cast<std::size_t>(i)];
        const double q = std::abs((w.adjoint() * z.m * w)(0).real() * scaling);
        if (q >= theta) terms[static_cast<std::size_t>(i)] = d.weights[static_cast<std::size_t>(i)];
    });
    double sum = 0.0;
    for (double t : terms) sum += t;
    return sum;
}

namespace {

LemmaReport smallball_report(const Design& d, const std::vector<ConeSample>& samples, double theta,
                             double denominator_constant) {
    LemmaReport rep;
    rep.min_slack = std::numeric_limits<double>::infinity();
    rep.rows.reserve(samples.size());
    for (const ConeSample& s : samples) {
        LemmaRow row;
        row.lhs = small_ball_exact(d, s.matrix, theta);
        const double cc = cone_constant(s.rho);
        const double bound_den = denominator_constant * cc * cc * s.rank_param;
        row.rhs = std::pow(1.0 - theta * theta, 3.0) / bound_den;
        row.slack = row.lhs - row.rhs;
        row.pass = row.slack >= -1e-12;
        if (!row.pass) ++rep.violations;
        rep.min_slack = std::min(rep.min_slack, row.slack);
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace

std::vector<ConeSample> worst_cone_candidates(int n, int r, double rho, std::uint64_t seed,
                                              int count) {
    if (2 * r > n)
        throw std::invalid_argument("worst_cone_candidates: need 2r <= n for a traceless spectrum");
    Rng rng(seed);
    std::vector<ConeSample> out;
    const double mag = 1.0 / std::sqrt(2.0 * r);
    for (int i = 0; i < count; ++i) {
        const Matrix u = haar_unitary(n, rng);
        RealVector spectrum = RealVector::Zero(n);
        for (int j = 0; j < r; ++j) {
            spectrum(2 * j) = mag;
            spectrum(2 * j + 1) = -mag;
        }
        ConeSample s;
        s.matrix = HermitianMatrix::symmetrized(u * spectrum.asDiagonal() * u.adjoint());
        s.rho = rho;
        s.rank_param = r;
        s.margin = cone_margin(s.matrix, r, rho);
        s.attempts = 1;
        out.push_back(std::move(s));
    }
    return out;
}

double small_ball_inf_estimate(const Design& d, const std::vector<ConeSample>& samples,
                               double theta) {
    if (samples.empty()) throw std::invalid_argument("small_ball_inf_estimate: no samples");
    double lowest = std::numeric_limits<double>::infinity();
    for (const ConeSample& s : samples)
        lowest = std::min(lowest, small_ball_exact(d, s.matrix, theta));
    const int r = samples.front().rank_param;
    if (2 * r <= d.dim)
        for (const ConeSample& s :
             worst_cone_candidates(d.dim, r, samples.front().rho, 0xbad, 8))
            lowest = std::min(lowest, small_ball_exact(d, s.matrix, theta));
    return lowest;
}

LemmaReport lemma1_bound_check(const Design& d, const std::vector<ConeSample>& samples,
                               double theta) {
    if (theta < 0.0 || theta > 1.0)
        throw std::invalid_argument("lemma1_bound_check: theta must lie in [0,1]");
    return smallball_report(d, samples, theta, 36.0);
}

LemmaReport lemma3_bound_check(const Design& d, const std::vector<ConeSample>& samples,
                               double theta, double rho, int r) {
    if (theta < 0.0 || theta > 1.0)
        throw std::invalid_argument("lemma3_bound_check: theta must lie in [0,1]");
    // hypotheses: theta_1 <= 1/4 or theta_inf <= 1/(4 r (1+(1+1/rho)^2)),
    // plus the frame condition within 1/n
    const double cc = cone_constant(rho);
    const double theta_inf_cap = 1.0 / (4.0 * r * cc * cc);
    const DesignCertificate cert = certify_design(d, 3);
    const bool inf_ok = cert.theta_inf <= theta_inf_cap;
    const bool one_ok = cert.theta_1.has_value() && *cert.theta_1 <= 0.25;
    if (!inf_ok && !one_ok) {
        std::ostringstream os;
        os << "lemma3_bound_check: accuracy hypothesis violated (theta_inf = " << cert.theta_inf
           << " > " << theta_inf_cap;
        if (cert.theta_1)
            os << ", theta_1 = " << *cert.theta_1 << " > 0.25";
        else
            os << ", theta_1 unavailable";
        os << ")";
        throw HypothesisError(os.str());
    }
    const double frame = frame_check(d);
    if (frame > 1.0 / d.dim) {
        std::ostringstream os;
        os << "lemma3_bound_check: frame condition violated (deviation = " << frame << " > 1/n = "
           << 1.0 / d.dim << ")";
        throw HypothesisError(os.str());
    }
    return smallball_report(d, samples, theta, 450.0);
}

PzCheck paley_zygmund_check(const std::vector<std::pair<double, double>>& distribution, double p,
                            double theta) {
    if (p <= 1.0) throw std::invalid_argument("paley_zygmund_check: p must exceed 1");
    if (theta < 0.0 || theta > 1.0)
        throw std::invalid_argument("paley_zygmund_check: theta must lie in [0,1]");
    double mean = 0.0, mean_p = 0.0, wsum = 0.0;
    for (const auto& [prob, value] : distribution) {
        if (prob < 0.0 || value < 0.0)
            throw std::invalid_argument("paley_zygmund_check: negative probability or value");
        mean += prob * value;
        mean_p += prob * std::pow(value, p);
        wsum += prob;
    }
    if (std::abs(wsum - 1.0) > 1e-9)
        throw std::invalid_argument("paley_zygmund_check: probabilities do not sum to 1");

    PzCheck out;
    for (const auto& [prob, value] : distribution)
        if (value > theta * mean) out.lhs += prob;
    const double exponent = p / (p - 1.0);
    out.rhs = mean_p == 0.0 ? 0.0
                            : std::pow(1.0 - theta, exponent) * std::pow(mean, exponent) /
                                  std::pow(mean_p, 1.0 / (p - 1.0));
    out.pass = out.lhs >= out.rhs - 1e-12;
    return out;
}

WmReport wm_estimate(const Design& d, int m, int trials, std::uint64_t seed, int r, double rho) {
    require_finite_design(d, "wm_estimate");
    if (m < 1 || trials < 1) throw std::invalid_argument("wm_estimate: m and trials must be >= 1");
    const int n = d.dim;
    const double scaling = std::sqrt(static_cast<double>(n) * (n + 1.0));

    std::vector<double> cdf(d.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        acc += d.weights[i];
        cdf[i] = acc;
    }
    cdf.back() = 1.0;

    std::vector<double> norms(static_cast<std::size_t>(trials));
    parallel_for_tasks(trials, [&](std::ptrdiff_t t) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
        Matrix h = Matrix::Zero(n, n);
        for (int j = 0; j < m; ++j) {
            const Vector& a = d.vectors[rng.sample_cdf(cdf)];
            const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
            h += (sign * scaling) * (a * a.adjoint());
        }
        h /= std::sqrt(static_cast<double>(m));
        norms[static_cast<std::size_t>(t)] =
            schatten_norm(HermitianMatrix::symmetrized(h), SchattenNorm::op);
    });

    double mean = 0.0;
    for (double v : norms) mean += v;
    mean /= trials;
    double var = 0.0;
    for (double v : norms) var += (v - mean) * (v - mean);
    var = trials > 1 ? var / (trials - 1) : 0.0;

    WmReport rep;
    rep.trials = trials;
    rep.h_norm_mean = mean;
    rep.h_norm_se = std::sqrt(var / trials);
    rep.lemma2_rhs = cone_constant(rho) * std::sqrt(static_cast<double>(r)) * mean;
    rep.proof_bound = 3.1049 * std::sqrt(n * std::log(2.0 * n));
    rep.within_proof_bound = mean <= rep.proof_bound + 2.0 * rep.h_norm_se;
    return rep;
}

NspWitness nsp_check(const MeasurementEnsemble& e, double rho, double tau, int r, NoiseNorm q,
                     const std::vector<HermitianMatrix>& samples) {
    if (tau <= 0.0) throw std::invalid_argument("nsp_check: tau must be positive");
    if (rho <= 0.0 || rho >= 1.0) throw std::invalid_argument("nsp_check: rho must be in (0,1)");
    NspWitness w;
    w.rho = rho;
    w.tau = tau;
    w.order = r;
    w.q = q;
    w.rows.reserve(samples.size());
    for (const HermitianMatrix& z : samples) {
        const auto [zr, zc] = rank_split(z, r);
        NspRow row;
        row.lhs = zr.frobenius();
        row.rhs = (rho / std::sqrt(static_cast<double>(r))) *
                      schatten_norm(zc, SchattenNorm::nuclear) +
                  tau * lq_norm(apply_operator(e, z), q);
        row.holds = row.lhs <= row.rhs + 1e-12;
        if (!row.holds) ++w.violations;
        w.rows.push_back(row);
    }
    return w;
}

}  // namespace designlift
