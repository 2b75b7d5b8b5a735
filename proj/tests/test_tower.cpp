#include "doctest.h"

#include "koszulkit/errors.hpp"
#include "koszulkit/generators.hpp"
#include "koszulkit/tower.hpp"

using namespace koszulkit;

namespace {

using BO = BandedOperator;

GaussRational g(long v) { return GaussRational(v); }

const BO kSa = BO::adjoint_shift();

BO plus_scalar(const BO& t, long c) { return t + BO::identity().scaled(g(c)); }

bool is_scalar(const Eigen::MatrixXcd& m, std::complex<double> c, double tol = 1e-10)
{
    return m.rows() == m.cols() && (m - c * Eigen::MatrixXcd::Identity(m.rows(), m.cols())).norm() <= tol;
}

Poly poly_of(std::initializer_list<long> c)
{
    std::vector<Scalar> v;
    for (long x : c) v.push_back(Scalar::from_int(x, Mode::exact));
    return Poly(v, Mode::exact);
}

} // namespace

TEST_CASE("kernel_tower examples")
{
    auto tw = kernel_tower(kSa, 12);
    CHECK(tw.n0 == 2);
    for (std::size_t n = 1; n <= 12; ++n) {
        CHECK(tw.dims[n] == 1);
        // H_n = span(e_{n-1}).
        CHECK(std::abs(tw.levels[n](static_cast<Eigen::Index>(n - 1), 0) - 1.0) < 1e-12);
    }
    for (std::size_t n = 2; n <= 12; ++n) CHECK(is_scalar(tw.A[n], 1.0));
    CHECK(tw.orthogonality < 1e-12);

    auto tw2 = kernel_tower(power(kSa, 2), 8);
    for (std::size_t n = 1; n <= 8; ++n) CHECK(tw2.dims[n] == 2);

    CHECK_THROWS_AS(kernel_tower(BO::identity(), 6), IndexSignError);
    CHECK_THROWS_AS(kernel_tower(BO::shift(), 6), IndexSignError);
}

TEST_CASE("commutant_blocks examples")
{
    auto tw = kernel_tower(kSa, 8);
    auto id = commutant_blocks(kSa, BO::identity(), tw);
    auto two = commutant_blocks(kSa, plus_scalar(kSa, 2), tw);
    auto self = commutant_blocks(kSa, kSa, tw);
    for (std::size_t n = 1; n <= 8; ++n) {
        CHECK(is_scalar(id.X[n], 1.0));
        CHECK(is_scalar(two.X[n], 2.0));
        CHECK(is_scalar(self.X[n], 0.0));
    }
    for (std::size_t n = 2; n <= 8; ++n) CHECK(two.intertwining[n] <= 1e-9);
    CHECK(two.upper_block <= 1e-10);
    CHECK_THROWS_AS(commutant_blocks(kSa, BO::shift(), tw), NonCommuting);
}

TEST_CASE("lemma23_check examples")
{
    const Mat n = Mat::from_ints(2, 2, {0, 1, 0, 0});
    const Mat inv = Mat::from_ints(2, 2, {2, 1, 1, 1});
    CHECK(lemma23_check(inv, Mat::identity(2), 1));
    for (unsigned k = 1; k <= 2; ++k) CHECK(lemma23_check(n, Mat::identity(2) + n, k));
    CHECK_THROWS_AS(lemma23_check(n, n, 1), PreconditionError);
    CHECK_THROWS_AS(lemma23_check(n, n.transpose(), 1), NonCommuting);
}

TEST_CASE("obstruction_certificate examples")
{
    auto oc = obstruction_certificate(kSa, plus_scalar(kSa, 2), 12);
    CHECK(oc.r == doctest::Approx(2.0).epsilon(1e-8));
    for (std::size_t n = 1; n <= 12; ++n) CHECK(oc.norms[n] >= 2.0 - 1e-8);
    CHECK(oc.verdict == Verdict::obstructed);
    CHECK(oc.tower.n0 <= 3);

    auto self = obstruction_certificate(kSa, kSa, 12);
    CHECK(self.r <= 1e-8);
    CHECK(self.verdict == Verdict::inconclusive);
    auto zero = obstruction_certificate(kSa, BO::zero(), 8);
    CHECK(zero.r <= 1e-8);
    CHECK(zero.verdict == Verdict::inconclusive);
}

TEST_CASE("growth_table examples")
{
    std::vector<unsigned> ms;
    for (unsigned m = 1; m <= 10; ++m) ms.push_back(m);
    auto rows = growth_table(kSa, ms, 4);
    for (const auto& r : rows) {
        CHECK(r.dim_ker == r.m);
        CHECK(r.dim_coker == 0);
        CHECK(r.exceeds == (r.m >= 5));
    }
    auto z2 = growth_table(BO::toeplitz({{2, g(1)}}), {1, 2, 3, 4, 5}, 4);
    for (const auto& r : z2) {
        CHECK(r.dim_coker == 2 * r.m);
        CHECK(r.index == -2 * static_cast<long>(r.m));
    }
    CHECK_THROWS_AS(growth_table(BO::identity(), {1}, 4), IndexZeroError);
}

TEST_CASE("augmented_pair_cohomology examples")
{
    auto z = augmented_pair_cohomology(kSa, poly_of({0, 1}));
    CHECK(z.dims == std::vector<std::size_t>{1, 1, 0});
    CHECK(z.index == 0);
    CHECK(augmented_pair_cohomology(kSa, poly_of({0, 0, 1})).dims == std::vector<std::size_t>{1, 1, 0});
    CHECK(augmented_pair_cohomology(kSa, Poly(Mode::exact)).dims == std::vector<std::size_t>{1, 1, 0});
    // S^2: ker 0, coker 2.
    CHECK(augmented_pair_cohomology(BO::toeplitz({{2, g(1)}}), Poly(Mode::exact)).dims ==
          std::vector<std::size_t>{0, 2, 2});
    CHECK_THROWS_AS(augmented_pair_cohomology(kSa, poly_of({1, 1})), PreconditionError);
}

TEST_CASE("property: tower invariants on catalog operators")
{
    const Poly q = poly_of({-3, 1}); // S* - 3, invertible
    const std::vector<BO> ops = {kSa, power(kSa, 2), poly(q, kSa) * kSa,
                                 BO::weighted_shift(DiagonalRule::periodic({}, {g(1), g(2)})).adjoint(),
                                 kSa + BO({}, Mat::from_ints(4, 4, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 5, 0, 0, 0}))};
    for (const BO& t : ops) {
        auto tw = kernel_tower(t, 8);
        CHECK(tw.orthogonality <= 1e-10);
        for (std::size_t n = 2; n < 8; ++n) CHECK(tw.dims[n + 1] <= tw.dims[n]);
        for (std::size_t n = 1; n <= 8; ++n) CHECK(tw.dims[n] >= 1);
        const Eigen::MatrixXcd all = tw.accumulated(8);
        CHECK((all.adjoint() * all - Eigen::MatrixXcd::Identity(all.cols(), all.cols())).norm() <= 1e-10);

        // Commutant built from polynomials in T.
        for (const Poly& p : {poly_of({2, 1}), poly_of({1, -1, 3}), poly_of({0, 0, 0, 1})}) {
            const BO s = poly(p, t);
            auto cb = commutant_blocks(t, s, tw);
            for (std::size_t n = 2; n <= 8; ++n) CHECK(cb.intertwining[n] <= 1e-9);
            CHECK(cb.charpoly_gap <= 1e-8);
        }

        // Growth law and augmented index.
        const long base = tw.index;
        for (const auto& r : growth_table(t, {1, 2, 3, 4}, 100)) CHECK(r.index == static_cast<long>(r.m) * base);
        for (const Poly& p : {poly_of({0, 1}), poly_of({0, 2, 1}), Poly(Mode::exact)})
            CHECK(augmented_pair_cohomology(t, p).index == 0);
    }
}

TEST_CASE("property: enlarging the depth keeps an obstructed verdict")
{
    for (long c : {2, -3}) {
        const BO k = plus_scalar(kSa, c);
        auto small = obstruction_certificate(kSa, k, 6);
        auto big = obstruction_certificate(kSa, k, 10);
        REQUIRE(small.verdict == Verdict::obstructed);
        CHECK(big.verdict == Verdict::obstructed);
    }
}

TEST_CASE("property: S is invertible on ker T^n for random invertible pairs")
{
    std::mt19937_64 rng(seed_from_env(41));
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t d = 2 + static_cast<std::size_t>(trial % 4);
        auto [t, s] = random_invertible_pair(rng, d);
        REQUIRE(cohomology(CommutingTuple::validate({t, s})).invertible);
        for (unsigned n = 1; n <= 4; ++n) CHECK(lemma23_check(t, s, n));
    }
}
