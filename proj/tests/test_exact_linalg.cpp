#include "doctest.h"

#include "koszulkit/errors.hpp"
#include "koszulkit/exact_linalg.hpp"

#include <random>

using namespace koszulkit;

namespace {

Mat random_int_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int lo, int hi, Mode mode = Mode::exact)
{
    std::uniform_int_distribution<int> dist(lo, hi);
    Mat m(r, c, mode);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.set(i, j, Scalar::from_int(dist(rng), mode));
    return m;
}

// Low-rank integer matrix: product of r x k and k x c factors.
Mat random_low_rank(std::mt19937& rng, std::size_t r, std::size_t c, std::size_t k)
{
    return random_int_matrix(rng, r, k, -3, 3) * random_int_matrix(rng, k, c, -3, 3);
}

} // namespace

TEST_CASE("scalar arithmetic is exact over the Gaussian rationals")
{
    Scalar a(GaussRational(mpq_class(1, 3), mpq_class(2)));
    Scalar b(GaussRational(mpq_class(-1, 2), mpq_class(1, 5)));
    Scalar q = a / b;
    CHECK((q * b).identical(a));
    CHECK((a - a).is_zero());
    CHECK_THROWS_AS(a + Scalar(std::complex<double>(1.0, 0.0)), ModeMismatch);
    CHECK(parse_rational("-6/4") == mpq_class(-3, 2));
    CHECK(parse_rational("0.25") == mpq_class(1, 4));
    CHECK_THROWS_AS(parse_rational("1/0"), FormatError);
    CHECK_THROWS_AS(parse_rational("abc"), FormatError);
}

TEST_CASE("kernel_basis examples")
{
    SUBCASE("zero map keeps everything")
    {
        CHECK(kernel_basis(Mat(2, 2)).cols() == 2);
    }
    SUBCASE("identity is injective")
    {
        CHECK(kernel_basis(Mat::identity(2)).cols() == 0);
    }
    SUBCASE("[[1,1],[2,2]] has kernel spanned by (1,-1)")
    {
        // Row reduction: R2 - 2 R1 = 0, so x + y = 0.
        Mat k = kernel_basis(Mat::from_ints(2, 2, {1, 1, 2, 2}));
        REQUIRE(k.cols() == 1);
        CHECK((k(0, 0) + k(1, 0)).is_zero());
        CHECK_FALSE(k(0, 0).is_zero());
    }
    SUBCASE("float mode")
    {
        Mat k = kernel_basis(Mat::from_ints(2, 2, {1, 1, 2, 2}, Mode::floating));
        REQUIRE(k.cols() == 1);
        CHECK(std::abs(k(0, 0).to_complex() + k(1, 0).to_complex()) < 1e-12);
    }
}

TEST_CASE("rank examples")
{
    CHECK(rank(Mat::identity(4)) == 4);
    CHECK(rank(Mat(3, 5)) == 0);
    // Rows 2 and 3 are 2x and 3x row 1.
    CHECK(rank(Mat::from_ints(3, 2, {1, 2, 2, 4, 3, 6})) == 1);
    CHECK(rank(Mat::from_ints(3, 2, {1, 2, 2, 4, 3, 6}, Mode::floating)) == 1);
}

TEST_CASE("mixed modes are rejected")
{
    Mat a = Mat::identity(2);
    Mat b = Mat::identity(2, Mode::floating);
    CHECK_THROWS_AS(a * b, ModeMismatch);
    std::vector<Scalar> e{Scalar::one(Mode::exact), Scalar::one(Mode::floating)};
    CHECK_THROWS_AS(Mat(1, 2, e), ModeMismatch);
}

TEST_CASE("spectral_radius examples")
{
    CHECK(spectral_radius(Mat::from_ints(1, 1, {2})) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(spectral_radius(Mat::from_ints(2, 2, {0, 1, 0, 0})) <= 1e-12);
    CHECK(spectral_radius(Mat::from_ints(2, 2, {0, 1, 1, 0})) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(spectral_radius(Mat::from_ints(2, 2, {0, 1, 1, 0}, Mode::floating)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(spectral_radius(Mat(2, 3)), ShapeError);
    // Repeated eigenvalue 3 of a Jordan block: exact route stays accurate.
    CHECK(spectral_radius(Mat::from_ints(3, 3, {3, 1, 0, 0, 3, 1, 0, 0, 3})) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("intertwine_verify examples")
{
    Mat i2 = Mat::identity(2);
    Mat x = Mat::from_ints(2, 2, {1, 2, 3, 4});
    CHECK(intertwine_verify(i2, x, x, 0.0));
    CHECK_FALSE(intertwine_verify(i2, Mat(2, 2), i2, 0.0));
    Mat a = Mat::from_ints(2, 2, {1, 0, 0, 2});
    Mat d = Mat::from_ints(2, 2, {3, 0, 0, 4});
    CHECK(intertwine_verify(a, d, d, 0.0));
    CHECK_THROWS_AS(intertwine_verify(Mat(2, 3), i2, i2, 0.0), ShapeError);
}

TEST_CASE("characteristic polynomial matches hand expansion")
{
    // [[1,2],[3,4]]: x^2 - 5x - 2.
    Poly p = characteristic_polynomial(Mat::from_ints(2, 2, {1, 2, 3, 4}));
    REQUIRE(p.degree() == 2);
    CHECK(p.coeff(0).identical(Scalar::from_int(-2, Mode::exact)));
    CHECK(p.coeff(1).identical(Scalar::from_int(-5, Mode::exact)));
    CHECK(p.coeff(2).identical(Scalar::one(Mode::exact)));
    // Upper triangular: product of (x - d_i).
    Poly q = characteristic_polynomial(Mat::from_ints(3, 3, {2, 7, 1, 0, 3, 5, 0, 0, -1}));
    Poly expect = (Poly::t(Mode::exact) - Poly::constant(Scalar::from_int(2, Mode::exact))) *
                  (Poly::t(Mode::exact) - Poly::constant(Scalar::from_int(3, Mode::exact))) *
                  (Poly::t(Mode::exact) + Poly::constant(Scalar::one(Mode::exact)));
    CHECK(q == expect);
}

TEST_CASE("solve and restriction")
{
    Mat a = Mat::from_ints(3, 2, {1, 0, 0, 1, 1, 1});
    Mat b = Mat::from_ints(3, 1, {2, 3, 5});
    auto x = solve(a, b);
    REQUIRE(x);
    CHECK(identical(a * *x, b));
    CHECK_FALSE(solve(a, Mat::from_ints(3, 1, {2, 3, 4})).has_value());

    // span(e1) is invariant for an upper-triangular matrix, span(e2) is not.
    Mat t = Mat::from_ints(2, 2, {5, 1, 0, 7});
    CHECK(identical(restrict_to_invariant(t, Mat::from_ints(2, 1, {1, 0})), Mat::from_ints(1, 1, {5})));
    CHECK_THROWS_AS(restrict_to_invariant(t, Mat::from_ints(2, 1, {0, 1})), InvarianceViolation);
}

TEST_CASE("property: rank-nullity, exact kernels, adjoint rank")
{
    std::mt19937 rng(20240611);
    std::uniform_int_distribution<int> dim(1, 6);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t r = static_cast<std::size_t>(dim(rng));
        const std::size_t c = static_cast<std::size_t>(dim(rng));
        const std::size_t k = static_cast<std::size_t>(dim(rng)) % std::min(r, c) + 1;
        Mat m = random_low_rank(rng, r, c, k);
        const std::size_t rk = rank(m);
        Mat ker = kernel_basis(m);
        CHECK(rk + ker.cols() == c);
        CHECK((m * ker).is_zero());
        CHECK(rank(ker) == ker.cols());
        CHECK(rank(m.adjoint()) == rk);

        Mat mf = m.to_mode(Mode::floating);
        CHECK(rank(mf) == rk);
        Mat kf = kernel_basis(mf);
        CHECK(kf.cols() == c - rk);
        CHECK((mf * kf).frobenius() <= 1e-9 * std::max(1.0, mf.norm2()));
        CHECK(rank(mf.adjoint()) == rank(mf));
    }
}

TEST_CASE("property: nilpotent spectral radius vanishes")
{
    std::mt19937 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t d = 1 + static_cast<std::size_t>(trial % 6);
        Mat n = random_int_matrix(rng, d, d, -4, 4);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j <= i; ++j) n.set(i, j, Scalar::zero(Mode::exact));
        CHECK(spectral_radius(n) <= 1e-8);
        CHECK(spectral_radius(n.to_mode(Mode::floating)) <= 1e-8);
    }
}
