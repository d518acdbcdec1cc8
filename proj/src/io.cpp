#include "designlift/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace designlift {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string noise_norm_token(NoiseNorm q) {
    switch (q) {
        case NoiseNorm::l1:
            return "1";
        case NoiseNorm::l2:
            return "2";
        case NoiseNorm::linf:
            return "inf";
    }
    return "2";
}

NoiseNorm parse_noise_norm(const std::string& token) {
    if (token == "1") return NoiseNorm::l1;
    if (token == "2") return NoiseNorm::l2;
    if (token == "inf") return NoiseNorm::linf;
    throw std::invalid_argument("unknown noise norm '" + token + "' (expected 1, 2 or inf)");
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    return os;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open '" + path + "' for reading");
    return is;
}

[[noreturn]] void parse_fail(const std::string& path, const std::string& what) {
    throw std::runtime_error(path + ": " + what);
}

double read_double(std::istream& is, const std::string& path, const char* what) {
    double v;
    if (!(is >> v)) parse_fail(path, std::string("expected ") + what);
    return v;
}

Complex read_complex(std::istream& is, const std::string& path) {
    const double re = read_double(is, path, "real part");
    const double im = read_double(is, path, "imaginary part");
    return {re, im};
}

void write_complex(std::ostream& os, Complex c) {
    os << format_double(c.real()) << ' ' << format_double(c.imag()) << '\n';
}

}  // namespace

void save_hmat(const HermitianMatrix& z, const std::string& path) {
    std::ofstream os = open_out(path);
    os << "HMAT " << z.dim() << '\n';
    for (Eigen::Index i = 0; i < z.dim(); ++i)
        for (Eigen::Index j = 0; j < z.dim(); ++j) write_complex(os, z.m(i, j));
}

HermitianMatrix load_hmat(const std::string& path) {
    std::ifstream is = open_in(path);
    std::string magic;
    Eigen::Index n = 0;
    if (!(is >> magic >> n) || magic != "HMAT" || n < 1) parse_fail(path, "bad HMAT header");
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = read_complex(is, path);
    try {
        return HermitianMatrix::checked(std::move(m));
    } catch (const std::invalid_argument& e) {
        parse_fail(path, e.what());
    }
}

void save_design(const Design& d, const std::string& path) {
    validate_design(d);
    std::ofstream os = open_out(path);
    os << "DESIGN " << d.dim << ' ' << d.size() << ' '
       << (d.normalization == DesignNormalization::unit ? "unit" : "super_normalized") << '\n';
    for (std::size_t i = 0; i < d.size(); ++i) {
        os << format_double(d.weights[i]) << '\n';
        for (int j = 0; j < d.dim; ++j) write_complex(os, d.vectors[i](j));
    }
}

Design load_design(const std::string& path) {
    std::ifstream is = open_in(path);
    std::string magic, mode;
    int n = 0;
    std::size_t count = 0;
    if (!(is >> magic >> n >> count >> mode) || magic != "DESIGN" || n < 1 || count < 1)
        parse_fail(path, "bad DESIGN header");
    Design d;
    d.dim = n;
    if (mode == "unit")
        d.normalization = DesignNormalization::unit;
    else if (mode == "super_normalized")
        d.normalization = DesignNormalization::super_normalized;
    else
        parse_fail(path, "unknown normalization mode '" + mode + "'");
    d.vectors.reserve(count);
    d.weights.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        d.weights.push_back(read_double(is, path, "weight"));
        Vector v(n);
        for (int j = 0; j < n; ++j) v(j) = read_complex(is, path);
        d.vectors.push_back(std::move(v));
    }
    try {
        validate_design(d);
    } catch (const std::invalid_argument& e) {
        parse_fail(path, e.what());
    }
    return d;
}

void save_ensemble(const MeasurementEnsemble& e, const std::string& path) {
    std::ofstream os = open_out(path);
    os << "ENS " << e.dim << ' ' << e.count() << ' ' << format_double(e.scaling) << ' ' << e.seed
       << '\n';
    for (const Vector& a : e.vectors)
        for (int j = 0; j < e.dim; ++j) write_complex(os, a(j));
}

MeasurementEnsemble load_ensemble(const std::string& path) {
    std::ifstream is = open_in(path);
    std::string magic;
    int n = 0;
    std::size_t m = 0;
    double scaling = 0.0;
    std::uint64_t seed = 0;
    if (!(is >> magic >> n >> m >> scaling >> seed) || magic != "ENS" || n < 1 || m < 1)
        parse_fail(path, "bad ENS header");
    std::vector<Vector> vectors;
    vectors.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        Vector v(n);
        for (int i = 0; i < n; ++i) v(i) = read_complex(is, path);
        vectors.push_back(std::move(v));
    }
    try {
        MeasurementEnsemble e = ensemble_from_vectors(std::move(vectors), seed);
        const double expected = std::sqrt(static_cast<double>(n) * (n + 1.0));
        if (std::abs(scaling - expected) > 1e-12 * expected)
            parse_fail(path, "scaling does not equal sqrt(n(n+1))");
        return e;
    } catch (const std::invalid_argument& err) {
        parse_fail(path, err.what());
    }
}

void save_observations(const RealVector& b, NoiseNorm q, double eta, const std::string& path) {
    std::ofstream os = open_out(path);
    os << "OBS " << b.size() << ' ' << noise_norm_token(q) << ' ' << format_double(eta) << '\n';
    for (Eigen::Index j = 0; j < b.size(); ++j) os << format_double(b(j)) << '\n';
}

Observations load_observations(const std::string& path) {
    std::ifstream is = open_in(path);
    std::string magic, qtok;
    Eigen::Index m = 0;
    double eta = 0.0;
    if (!(is >> magic >> m >> qtok >> eta) || magic != "OBS" || m < 1)
        parse_fail(path, "bad OBS header");
    Observations obs;
    try {
        obs.q = parse_noise_norm(qtok);
    } catch (const std::invalid_argument& e) {
        parse_fail(path, e.what());
    }
    if (eta < 0.0) parse_fail(path, "negative noise budget");
    obs.eta = eta;
    obs.values.resize(m);
    for (Eigen::Index j = 0; j < m; ++j) obs.values(j) = read_double(is, path, "observation");
    return obs;
}

}  // namespace designlift
