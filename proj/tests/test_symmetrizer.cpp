#include "doctest.h"

#include "designlift/symmetrizer.hpp"
#include "test_util.hpp"

using namespace designlift;
using designlift::testing::random_hermitian;

namespace {

// independent oracle: tr(P_sym3 (X (x) Y (x) Z)) from the dense n^3 x n^3
// Kronecker construction
double sym3_trace_oracle(const HermitianMatrix& x, const HermitianMatrix& y,
                         const HermitianMatrix& z) {
    const int n = static_cast<int>(x.dim());
    const Matrix k = kron(kron(x.m, y.m), z.m);
    const SymmetrizerProjector p(n, 3, /*build_dense=*/true);
    return (*p.dense() * k).trace().real();
}

}  // namespace

TEST_CASE("sym projector trace equals binom(n+t-1, t)") {
    CHECK(sym_projector(2, 2).trace() == doctest::Approx(3.0));
    CHECK(sym_projector(2, 3).trace() == doctest::Approx(4.0));
    CHECK(sym_projector(3, 3).trace() == doctest::Approx(10.0));
    for (int n = 2; n <= 4; ++n)
        for (int t = 1; t <= 3; ++t) {
            const auto p = sym_projector(n, t);
            CHECK(p.dense()->trace().real() == doctest::Approx(p.trace()).epsilon(1e-8));
        }
}

TEST_CASE("sym projector is idempotent and self-adjoint") {
    for (int n = 2; n <= 4; ++n)
        for (int t = 2; t <= 3; ++t) {
            const auto p = sym_projector(n, t);
            const Matrix& d = *p.dense();
            CHECK((d * d - d).cwiseAbs().maxCoeff() <= 1e-10);
            CHECK((d - d.adjoint()).cwiseAbs().maxCoeff() <= 1e-10);
        }
}

TEST_CASE("sym projector dense budget") {
    CHECK_THROWS_AS(sym_projector(9, 4), std::length_error);  // 9^4 = 6561 > 4096
    CHECK_NOTHROW(sym_projector(8, 4));                       // 8^4 = 4096 exactly
    // matrix-free path has no budget
    CHECK_NOTHROW(sym_projector(9, 4, /*build_dense=*/false));
}

TEST_CASE("sym projector matrix-free apply matches dense") {
    Rng rng(7);
    for (int n = 2; n <= 4; ++n) {
        const auto p = sym_projector(n, 3);
        Vector v(p.rows());
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.cnormal();
        const Vector dense = *p.dense() * v;
        CHECK((p.apply(v) - dense).norm() <= 1e-12 * dense.norm());
        // serial reference agrees bit for bit with the parallel kernel
        CHECK((p.apply(v) - p.apply_serial(v)).norm() == 0.0);
    }
}

TEST_CASE("sym3_trace: identity gives n(n+1)(n+2)/6") {
    for (int n = 2; n <= 5; ++n) {
        const HermitianMatrix id = HermitianMatrix::identity(n);
        CHECK(sym3_trace(id, id, id) == doctest::Approx(n * (n + 1.0) * (n + 2.0) / 6.0));
    }
}

TEST_CASE("sym3_trace: traceless factor with identities vanishes") {
    RealVector d(2);
    d << 1, -1;
    const HermitianMatrix x = HermitianMatrix::diagonal(d);
    const HermitianMatrix id = HermitianMatrix::identity(2);
    CHECK(std::abs(sym3_trace(x, id, id)) <= 1e-12);
}

TEST_CASE("sym3_trace matches the dense Kronecker oracle") {
    Rng rng(77);
    for (int n = 2; n <= 5; ++n) {
        for (int rep = 0; rep < 100; ++rep) {
            const HermitianMatrix x = random_hermitian(n, rng);
            const HermitianMatrix y = random_hermitian(n, rng);
            const HermitianMatrix z = random_hermitian(n, rng);
            CHECK(std::abs(sym3_trace(x, y, z) - sym3_trace_oracle(x, y, z)) <= 1e-8);
        }
    }
}

TEST_CASE("sym3_trace is symmetric in its arguments") {
    Rng rng(78);
    const HermitianMatrix a = random_hermitian(4, rng);
    const HermitianMatrix b = random_hermitian(4, rng);
    const HermitianMatrix c = random_hermitian(4, rng);
    const double ref = sym3_trace(a, b, c);
    CHECK(sym3_trace(a, c, b) == doctest::Approx(ref));
    CHECK(sym3_trace(b, a, c) == doctest::Approx(ref));
    CHECK(sym3_trace(b, c, a) == doctest::Approx(ref));
    CHECK(sym3_trace(c, a, b) == doctest::Approx(ref));
    CHECK(sym3_trace(c, b, a) == doctest::Approx(ref));
}

TEST_CASE("sym3_trace rejects mismatched dimensions") {
    CHECK_THROWS_AS(
        sym3_trace(HermitianMatrix::identity(2), HermitianMatrix::identity(3),
                   HermitianMatrix::identity(3)),
        std::invalid_argument);
}
