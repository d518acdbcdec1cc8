#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "designlift/design.hpp"
#include "designlift/parallel.hpp"

namespace designlift {

namespace {

// Pauli points live in F_2^{2k}: bits [0,k) are the X part, bits [k,2k) the
// Z part. Two Paulis commute iff the symplectic form vanishes.
struct PauliSpace {
    int k;
    std::uint32_t x_mask;

    explicit PauliSpace(int qubits) : k(qubits), x_mask((1u << qubits) - 1) {}

    bool commute(std::uint32_t a, std::uint32_t b) const {
        const std::uint32_t ax = a & x_mask, az = a >> k;
        const std::uint32_t bx = b & x_mask, bz = b >> k;
        return (std::popcount((ax & bz) ^ (az & bx)) & 1) == 0;
    }

    // Hermitian matrix of the Pauli point: tensor factors i^{x z} X^x Z^z.
    Matrix matrix(std::uint32_t p) const {
        static const Complex I(0, 1);
        Matrix out = Matrix::Identity(1, 1);
        for (int q = 0; q < k; ++q) {
            const int x = (p >> q) & 1;
            const int z = (p >> (k + q)) & 1;
            Matrix w(2, 2);
            if (!x && !z)
                w << 1, 0, 0, 1;
            else if (x && !z)
                w << 0, 1, 1, 0;
            else if (!x && z)
                w << 1, 0, 0, -1;
            else
                w << 0, -I, I, 0;
            out = kron(out, w);
        }
        return out;
    }
};

// span of a basis over F_2, returned as the sorted element list (with 0)
std::vector<std::uint32_t> f2_span(const std::vector<std::uint32_t>& basis) {
    std::vector<std::uint32_t> span{0};
    for (std::uint32_t g : basis) {
        const std::size_t sz = span.size();
        for (std::size_t i = 0; i < sz; ++i) span.push_back(span[i] ^ g);
    }
    std::sort(span.begin(), span.end());
    return span;
}

// greedy lexicographic basis of a subspace given by its sorted element list
std::vector<std::uint32_t> canonical_basis(const std::vector<std::uint32_t>& span, int k) {
    std::vector<std::uint32_t> basis;
    std::vector<std::uint32_t> reduced;  // xor-basis rows for the independence test
    for (std::uint32_t v : span) {
        if (v == 0 || static_cast<int>(basis.size()) == k) continue;
        std::uint32_t r = v;
        for (std::uint32_t e : reduced)
            if ((r ^ e) < r) r ^= e;
        if (r == 0) continue;
        basis.push_back(v);
        reduced.push_back(r);
        std::sort(reduced.rbegin(), reduced.rend());
    }
    return basis;
}

// all maximal isotropic subspaces of F_2^{2k}, each as its sorted span
std::vector<std::vector<std::uint32_t>> maximal_isotropic_subspaces(const PauliSpace& ps) {
    const std::uint32_t total = 1u << (2 * ps.k);
    std::set<std::vector<std::uint32_t>> found;

    std::vector<std::uint32_t> basis;
    auto extend = [&](auto&& self, std::uint32_t start) -> void {
        if (static_cast<int>(basis.size()) == ps.k) {
            found.insert(f2_span(basis));
            return;
        }
        for (std::uint32_t v = start; v < total; ++v) {
            bool ok = true;
            for (std::uint32_t g : basis)
                if (!ps.commute(g, v)) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            // reject dependent picks
            const auto span = f2_span(basis);
            if (std::binary_search(span.begin(), span.end(), v)) continue;
            basis.push_back(v);
            self(self, v + 1);
            basis.pop_back();
        }
    };
    extend(extend, 1);

    return {found.begin(), found.end()};
}

// canonical global phase: first amplitude above threshold made real positive
void canonicalize_phase(Vector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v(i));
        if (mag > 1e-8) {
            v *= std::conj(v(i)) / mag;
            break;
        }
    }
}

}  // namespace

std::size_t stabilizer_state_count(int k) {
    std::size_t count = 1u << k;
    for (int j = 1; j <= k; ++j) count *= (1u << j) + 1;
    return count;
}

Design stabilizer_design(int k) {
    if (k < 1 || k > 3)
        throw std::length_error("stabilizer_design: supported qubit counts are 1, 2, 3");
    const PauliSpace ps(k);
    const int n = 1 << k;
    const auto subspaces = maximal_isotropic_subspaces(ps);
    const std::size_t signs = 1u << k;

    std::vector<Vector> states(subspaces.size() * signs);
    parallel_for_index(static_cast<std::ptrdiff_t>(subspaces.size()), [&](std::ptrdiff_t si) {
        const auto basis = canonical_basis(subspaces[static_cast<std::size_t>(si)], k);
        std::vector<Matrix> gens;
        gens.reserve(basis.size());
        for (std::uint32_t g : basis) gens.push_back(ps.matrix(g));

        for (std::size_t s = 0; s < signs; ++s) {
            Matrix proj = Matrix::Identity(n, n);
            for (std::size_t j = 0; j < gens.size(); ++j) {
                const double sign = (s >> j) & 1 ? -1.0 : 1.0;
                proj = 0.5 * (proj + sign * proj * gens[j]);
            }
            // rank-one projector: pull the state out of the strongest column
            Eigen::Index best = 0;
            for (Eigen::Index c = 1; c < n; ++c)
                if (proj(c, c).real() > proj(best, best).real()) best = c;
            Vector v = proj.col(best) / std::sqrt(proj(best, best).real());
            v /= v.norm();
            canonicalize_phase(v);
            states[static_cast<std::size_t>(si) * signs + s] = std::move(v);
        }
    });

    // dedupe by canonical amplitudes (distinct stabilizer groups give distinct
    // states, so this is a consistency guard rather than a filter)
    std::map<std::vector<std::int64_t>, std::size_t> seen;
    std::vector<Vector> unique_states;
    for (auto& v : states) {
        std::vector<std::int64_t> key;
        key.reserve(static_cast<std::size_t>(2 * n));
        for (Eigen::Index i = 0; i < n; ++i) {
            key.push_back(std::llround(v(i).real() * 1e9));
            key.push_back(std::llround(v(i).imag() * 1e9));
        }
        if (seen.emplace(std::move(key), unique_states.size()).second)
            unique_states.push_back(std::move(v));
    }

    Design d;
    d.dim = n;
    d.vectors = std::move(unique_states);
    d.weights.assign(d.vectors.size(), 1.0 / static_cast<double>(d.vectors.size()));
    d.normalization = DesignNormalization::unit;
    validate_design(d);
    return d;
}

}  // namespace designlift
