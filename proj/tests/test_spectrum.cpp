#include "doctest.h"

#include "koszulkit/errors.hpp"
#include "koszulkit/generators.hpp"
#include "koszulkit/spectrum.hpp"

using namespace koszulkit;

namespace {

Scalar q(long v) { return Scalar::from_int(v, Mode::exact); }

Mat diag(std::initializer_list<long> d, Mode mode = Mode::exact)
{
    Mat m(d.size(), d.size(), mode);
    std::size_t i = 0;
    for (long v : d) {
        m.set(i, i, Scalar::from_int(v, mode));
        ++i;
    }
    return m;
}

Mat jordan3() { return Mat::from_ints(3, 3, {0, 1, 0, 0, 0, 1, 0, 0, 0}); }

Monomial mono(long c, std::vector<unsigned> e) { return {q(c), std::move(e)}; }

bool has_point(const JointSpectrum& js, std::vector<long> coords, std::size_t mult)
{
    for (const auto& p : js.points) {
        bool match = p.multiplicity == mult;
        for (std::size_t i = 0; match && i < coords.size(); ++i)
            match = std::abs(p.coords[i].to_complex() - std::complex<double>(static_cast<double>(coords[i]), 0.0)) < 1e-9;
        if (match) return true;
    }
    return false;
}

} // namespace

TEST_CASE("joint_spectrum examples")
{
    for (Mode mode : {Mode::exact, Mode::floating}) {
        CAPTURE(to_string(mode));
        auto js = joint_spectrum(CommutingTuple::validate({diag({1, 2}, mode), diag({3, 4}, mode)}));
        CHECK(js.points.size() == 2);
        CHECK(has_point(js, {1, 3}, 1));
        CHECK(has_point(js, {2, 4}, 1));

        auto id = joint_spectrum(CommutingTuple::validate({Mat::identity(2, mode), Mat::identity(2, mode)}));
        CHECK(id.points.size() == 1);
        CHECK(has_point(id, {1, 1}, 2));

        const Mat n = jordan3().to_mode(mode);
        auto nil = joint_spectrum(CommutingTuple::validate({n, n * n}));
        CHECK(nil.points.size() == 1);
        CHECK(has_point(nil, {0, 0}, 3));
    }
    // Cross-check the nilpotent case against Koszul invertibility.
    auto t = CommutingTuple::validate({jordan3(), jordan3() * jordan3()});
    CHECK(in_spectrum(t, {q(0), q(0)}));
    CHECK_FALSE(in_spectrum(t, {q(1), q(0)}));
    CHECK_FALSE(in_spectrum(t, {q(0), q(-2)}));
}

TEST_CASE("exact mode rejects irrational eigenvalues")
{
    // x^2 - 2.
    CHECK_THROWS_AS(joint_spectrum(CommutingTuple::validate({Mat::from_ints(2, 2, {0, 2, 1, 0})})), DeflationFailure);
    // Float mode handles it.
    auto js = joint_spectrum(CommutingTuple::validate({Mat::from_ints(2, 2, {0, 2, 1, 0}, Mode::floating)}));
    REQUIRE(js.points.size() == 2);
    CHECK(js.points[0].coords[0].to_complex().real() == doctest::Approx(-std::sqrt(2.0)));
}

TEST_CASE("Gaussian-rational eigenvalues in exact mode")
{
    // Rotation by 90 degrees: eigenvalues +-i.
    auto js = joint_spectrum(CommutingTuple::validate({Mat::from_ints(2, 2, {0, -1, 1, 0})}));
    REQUIRE(js.points.size() == 2);
    CHECK(js.points[0].coords[0].exact() == GaussRational(0, -1));
    CHECK(js.points[1].coords[0].exact() == GaussRational(0, 1));
}

TEST_CASE("apply_poly_map examples")
{
    auto t = CommutingTuple::validate({Mat::from_ints(2, 2, {0, 1, 0, 0}), Mat(2, 2)});
    auto same = apply_poly_map(PolyMap::identity(2), t);
    CHECK(identical(same[0], t[0]));
    CHECK(identical(same[1], t[1]));

    for (unsigned m = 2; m <= 4; ++m) {
        PolyMap f(2, {{mono(1, {m, 0})}, {mono(1, {0, 1})}});
        auto ft = apply_poly_map(f, t);
        CHECK(ft[0].is_zero());
        CHECK(ft[1].is_zero());
    }
    PolyMap square(1, {{mono(1, {2})}});
    auto sq = apply_poly_map(square, CommutingTuple::validate({diag({1, 2})}));
    CHECK(identical(sq[0], diag({1, 4})));
    CHECK_THROWS_AS(apply_poly_map(square, t), ShapeError);
}

TEST_CASE("spectral_mapping_check examples")
{
    auto t = CommutingTuple::validate({Mat::from_ints(2, 2, {0, 1, 0, 0}), Mat(2, 2)});
    CHECK(spectral_mapping_check(PolyMap::identity(2), t, 1e-9));
    CHECK(spectral_mapping_check(PolyMap(1, {{mono(1, {2})}}), CommutingTuple::validate({diag({1, 2})}), 1e-9));
    PolyMap shear(2, {{mono(1, {1, 0})}, {mono(1, {0, 1}), mono(-1, {1, 0})}});
    CHECK(spectral_mapping_check(shear, t, 1e-9));
}

TEST_CASE("lemma11_check examples")
{
    CHECK(lemma11_check(CommutingTuple::validate({Mat::identity(2)}), PolyMap::identity(1)));
    auto scalars = CommutingTuple::validate({q(2) * Mat::identity(2), q(3) * Mat::identity(2)});
    for (unsigned m = 1; m <= 6; ++m)
        CHECK(lemma11_check(scalars, PolyMap(2, {{mono(1, {m, 0})}, {mono(1, {0, 1})}})));
    // (z1, z2 - z1 + 1) maps the spectrum {(1,1), (2,3)} to {(1,1), (2,2)}.
    auto diag_pair = CommutingTuple::validate({diag({1, 2}), diag({1, 3})});
    PolyMap g(2, {{mono(1, {1, 0})}, {mono(1, {0, 1}), mono(-1, {1, 0}), mono(1, {0, 0})}});
    CHECK(lemma11_check(diag_pair, g));
    CHECK_THROWS_AS(lemma11_check(CommutingTuple::validate({Mat::from_ints(2, 2, {0, 1, 0, 0})}), PolyMap::identity(1)),
                    PreconditionError);
}

TEST_CASE("zero fiber spot check")
{
    PolyMap f(2, {{mono(1, {3, 0})}, {mono(1, {0, 1})}});
    auto r = zero_fiber_spot_check(f, 1);
    CHECK(r.vanishes_at_origin);
    CHECK(r.samples == 1000);
    CHECK_FALSE(r.counterexample.has_value());
    // z1 * z2 vanishes on both axes; a constant-free map with a big zero set.
    PolyMap g(2, {{mono(1, {1, 1})}});
    CHECK(zero_fiber_spot_check(g, 1).vanishes_at_origin);
    PolyMap h(1, {{mono(1, {0})}});
    CHECK_FALSE(zero_fiber_spot_check(h, 1).vanishes_at_origin);
}

TEST_CASE("property: spectrum invariants on random triangularizable tuples")
{
    std::mt19937_64 rng(seed_from_env(21));
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 3);
        const std::size_t d = 1 + static_cast<std::size_t>((trial / 3) % 5);
        auto t = random_triangularizable_tuple(rng, n, d);
        auto js = joint_spectrum(t);
        CHECK(js.total_multiplicity() == d);
        CHECK(!js.points.empty());
        CHECK(js.points.size() <= d);
        for (const auto& p : js.points) CHECK(in_spectrum(t, p.coords));

        // Ten integer points off the spectrum are not in it.
        std::uniform_int_distribution<long> coord(-20, 20);
        int off = 0;
        while (off < 10) {
            std::vector<Scalar> z;
            for (std::size_t i = 0; i < n; ++i) z.push_back(q(coord(rng)));
            bool listed = false;
            for (const auto& p : js.points) {
                bool eq = true;
                for (std::size_t i = 0; i < n; ++i) eq = eq && p.coords[i].exact() == z[i].exact();
                listed = listed || eq;
            }
            if (listed) continue;
            CHECK_FALSE(in_spectrum(t, z));
            ++off;
        }

        // Reversing the operators reverses coordinates.
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = n - 1 - i;
        auto rev = joint_spectrum(t.permuted(order));
        CHECK(rev.points.size() == js.points.size());
        for (const auto& p : rev.points) {
            std::vector<Scalar> back(p.coords.rbegin(), p.coords.rend());
            CHECK(in_spectrum(t, back));
        }

        // Float mode finds the same points.
        auto tf = CommutingTuple::validate({t.matrices().begin(), t.matrices().end()});
        std::vector<Mat> fm;
        for (const auto& m : t.matrices()) fm.push_back(m.to_mode(Mode::floating));
        auto jf = joint_spectrum(CommutingTuple::validate(fm));
        CHECK(jf.points.size() == js.points.size());
        CHECK(jf.total_multiplicity() == d);
    }
}

TEST_CASE("property: composition of polynomial maps")
{
    std::mt19937_64 rng(seed_from_env(22));
    std::uniform_int_distribution<long> c(-2, 2);
    std::uniform_int_distribution<unsigned> e(0, 2);
    for (int trial = 0; trial < 30; ++trial) {
        auto t = random_polynomial_tuple(rng, 2, 3);
        auto random_map = [&](std::size_t arity, std::size_t outs) {
            std::vector<std::vector<Monomial>> comps(outs);
            for (auto& comp : comps)
                for (int k = 0; k < 3; ++k) {
                    std::vector<unsigned> ex(arity);
                    for (auto& x : ex) x = e(rng);
                    comp.push_back({q(c(rng)), ex});
                }
            return PolyMap(arity, std::move(comps));
        };
        PolyMap g = random_map(2, 2);
        PolyMap f = random_map(2, 3);
        auto lhs = apply_poly_map(compose(f, g), t);
        auto rhs = apply_poly_map(f, apply_poly_map(g, t));
        for (std::size_t i = 0; i < 3; ++i) CHECK(identical(lhs[i], rhs[i]));
    }
}
