#include <algorithm>
#include <cstdio>
#include <fstream>

#include "doctest.h"

#include "designlift/design.hpp"
#include "designlift/io.hpp"
#include "designlift/kernels.hpp"
#include "designlift/symmetrizer.hpp"
#include "test_util.hpp"

using namespace designlift;

TEST_CASE("sphere_sampler: n=1 draws unit-modulus scalars") {
    SphereSampler s(1, 5);
    for (int i = 0; i < 50; ++i) CHECK(std::abs(s.next()(0)) == doctest::Approx(1.0));
}

TEST_CASE("sphere_sampler: empirical second moment near id/n") {
    const int n = 16, draws = 10000;
    SphereSampler s(n, 99);
    Matrix acc = Matrix::Zero(n, n);
    for (int i = 0; i < draws; ++i) {
        const Vector a = s.next();
        acc += a * a.adjoint();
    }
    acc /= static_cast<double>(draws);
    const Matrix diff = acc - Matrix::Identity(n, n) / static_cast<double>(n);
    CHECK(diff.cwiseAbs().maxCoeff() <= 5.0 / std::sqrt(static_cast<double>(draws)));
}

TEST_CASE("sphere_sampler: fixed seed reproduces the stream") {
    SphereSampler a(4, 123), b(4, 123);
    for (int i = 0; i < 10; ++i) CHECK((a.next() - b.next()).norm() == 0.0);
}

namespace {

Vector canonical(Vector v) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v(i)) > 1e-8) {
            v *= std::conj(v(i)) / std::abs(v(i));
            break;
        }
    return v;
}

bool contains_state(const Design& d, const Vector& state) {
    const Vector c = canonical(state);
    return std::any_of(d.vectors.begin(), d.vectors.end(),
                       [&](const Vector& w) { return (canonical(w) - c).norm() <= 1e-10; });
}

}  // namespace

TEST_CASE("stabilizer_design(1) is the six single-qubit Pauli eigenstates") {
    const Design d = stabilizer_design(1);
    REQUIRE(d.size() == 6);
    const double s = 1.0 / std::sqrt(2.0);
    const Complex i01(0, 1);
    std::vector<Vector> expected(6, Vector(2));
    expected[0] << 1, 0;              // +Z
    expected[1] << 0, 1;              // -Z
    expected[2] << s, s;              // +X
    expected[3] << s, -s;             // -X
    expected[4] << s, s * i01;        // +Y
    expected[5] << s, -s * i01;       // -Y
    for (const Vector& e : expected) CHECK(contains_state(d, e));
    for (double w : d.weights) CHECK(w == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("stabilizer state counts match the closed formula") {
    CHECK(stabilizer_state_count(1) == 6);
    CHECK(stabilizer_state_count(2) == 60);
    CHECK(stabilizer_state_count(3) == 1080);
    CHECK(stabilizer_design(1).size() == 6);
    CHECK(stabilizer_design(2).size() == 60);
}

TEST_CASE("stabilizer_design rejects unsupported qubit counts") {
    CHECK_THROWS_AS(stabilizer_design(0), std::length_error);
    CHECK_THROWS_AS(stabilizer_design(4), std::length_error);
}

TEST_CASE("stabilizer_design(1) is an exact 3-design") {
    const Design d = stabilizer_design(1);
    CHECK(design_accuracy(d, 3, SchattenNorm::op, AccuracyMethod::dense) <= 1e-10);
}

TEST_CASE("lower moments are inherited by exact designs") {
    const Design d = stabilizer_design(2);
    for (int t = 1; t <= 3; ++t)
        CHECK(design_accuracy(d, t, SchattenNorm::op, AccuracyMethod::dense) <= 1e-10);
}

TEST_CASE("stabilizer states are not a 4-design") {
    const Design d = stabilizer_design(1);
    CHECK(design_accuracy(d, 4, SchattenNorm::op, AccuracyMethod::dense) > 1e-3);
}

TEST_CASE("single-vector design accuracy at t=1 is 1") {
    Design d;
    d.dim = 2;
    Vector e1(2);
    e1 << 1, 0;
    d.vectors = {e1};
    d.weights = {1.0};
    CHECK(design_accuracy(d, 1, SchattenNorm::op) == doctest::Approx(1.0));
}

TEST_CASE("power iteration agrees with the dense accuracy") {
    const Design d2 = stabilizer_design(2);
    for (int t : {3, 2}) {
        const double dense = design_accuracy(d2, t, SchattenNorm::op, AccuracyMethod::dense);
        const double power =
            design_accuracy(d2, t, SchattenNorm::op, AccuracyMethod::power_iteration);
        CHECK(std::abs(dense - power) <= 1e-6 * std::max(dense, power) + 1e-12);
    }
    // largest case where both paths run: 512-dimensional tensors
    const Design d3 = stabilizer_design(3);
    const double dense3 = design_accuracy(d3, 3, SchattenNorm::op, AccuracyMethod::dense);
    const double power3 = design_accuracy(d3, 3, SchattenNorm::op, AccuracyMethod::power_iteration);
    CHECK(std::abs(dense3 - power3) <= 1e-6 * std::max(dense3, power3) + 1e-12);
    // a design with genuinely nonzero deviation
    Design single;
    single.dim = 2;
    Vector e1(2);
    e1 << 1, 0;
    single.vectors = {e1};
    single.weights = {1.0};
    for (int t = 1; t <= 3; ++t) {
        const double dense = design_accuracy(single, t, SchattenNorm::op, AccuracyMethod::dense);
        const double power =
            design_accuracy(single, t, SchattenNorm::op, AccuracyMethod::power_iteration);
        CHECK(std::abs(dense - power) <= 1e-6 * dense);
    }
}

TEST_CASE("operator accuracy never exceeds nuclear accuracy at the raw norm level") {
    Rng rng(3);
    SphereSampler s(3, 17);
    Design d;
    d.dim = 3;
    for (int i = 0; i < 5; ++i) d.vectors.push_back(s.next());
    d.weights.assign(5, 0.2);
    for (int t = 1; t <= 3; ++t) {
        const double theta_inf = design_accuracy(d, t, SchattenNorm::op, AccuracyMethod::dense);
        const double theta_1 = design_accuracy(d, t, SchattenNorm::nuclear, AccuracyMethod::dense);
        CHECK(theta_inf <= theta_1 + 1e-10);
    }
}

TEST_CASE("super_normalize scales vectors and flips the mode") {
    const Design d = stabilizer_design(1);
    const Design sn = super_normalize(d);
    CHECK(sn.normalization == DesignNormalization::super_normalized);
    const double target = std::sqrt(2.0 * 3.0);  // ||w~||^2 = sqrt(n(n+1))
    for (const Vector& w : sn.vectors) CHECK(w.squaredNorm() == doctest::Approx(target));
    CHECK_THROWS_AS(super_normalize(sn), std::invalid_argument);

    CHECK(super_normalization_factor(3) == doctest::Approx(std::pow(12.0, 0.25)));
    CHECK(super_normalization_factor(1) == doctest::Approx(std::pow(2.0, 0.25)));
}

TEST_CASE("frame_check values") {
    CHECK(frame_check(stabilizer_design(1)) <= 1e-12);

    Design single;
    single.dim = 2;
    Vector e1(2);
    e1 << 1, 0;
    single.vectors = {e1};
    single.weights = {1.0};
    CHECK(frame_check(single) == doctest::Approx(0.5));

    Design pair;
    pair.dim = 2;
    Vector e2(2);
    e2 << 0, 1;
    pair.vectors = {e1, e2};
    pair.weights = {0.5, 0.5};
    CHECK(frame_check(pair) <= 1e-12);
}

TEST_CASE("exact design moment operator matches the symmetrizer on random tensors") {
    const Design d = stabilizer_design(2);  // n = 4, t = 3: 64-dim tensors
    const Matrix cols = kernels::tensor_power_columns(d.vectors, 3);
    const SymmetrizerProjector sym(4, 3, /*build_dense=*/false);
    const double inv_dim = 1.0 / sym_subspace_dim(4, 3);
    Rng rng(2024);
    for (int rep = 0; rep < 20; ++rep) {
        Vector v(cols.rows());
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.cnormal();
        const Vector lhs = kernels::weighted_gram_apply(cols, d.weights, v);
        const Vector rhs = inv_dim * sym.apply(v);
        CHECK((lhs - rhs).norm() <= 1e-9 * v.norm());
    }
}

TEST_CASE("design file round trip and validation") {
    const Design d = stabilizer_design(1);
    const std::string path = "test_design_roundtrip.tmp";
    save_design(d, path);
    const Design back = load_design(path);
    REQUIRE(back.size() == d.size());
    CHECK(back.normalization == DesignNormalization::unit);
    for (std::size_t i = 0; i < d.size(); ++i) {
        CHECK((back.vectors[i] - d.vectors[i]).norm() <= 1e-12);
        CHECK(std::abs(back.weights[i] - d.weights[i]) <= 1e-15);
    }
    std::remove(path.c_str());
}

TEST_CASE("load_design rejects bad weight sums") {
    const std::string path = "test_design_badsum.tmp";
    {
        std::ofstream os(path);
        os << "DESIGN 2 2 unit\n";
        os << "0.5\n1 0\n0 0\n";
        os << "0.4\n0 0\n1 0\n";  // weights sum to 0.9
    }
    CHECK_THROWS_WITH_AS(load_design(path), doctest::Contains("sum"), std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("single-vector design file is valid") {
    const std::string path = "test_design_single.tmp";
    {
        std::ofstream os(path);
        os << "DESIGN 2 1 unit\n";
        os << "1\n1 0\n0 0\n";
    }
    const Design d = load_design(path);
    CHECK(d.size() == 1);
    CHECK(d.vectors[0](0) == Complex(1, 0));
    std::remove(path.c_str());
}

TEST_CASE("validate_design names the failing index") {
    Design d;
    d.dim = 2;
    Vector good(2), bad(2);
    good << 1, 0;
    bad << 2, 0;
    d.vectors = {good, bad};
    d.weights = {0.5, 0.5};
    CHECK_THROWS_WITH_AS(validate_design(d), doctest::Contains("vector 1"), std::invalid_argument);
}
