#include "koszulkit/generators.hpp"

#include <cstdlib>
#include <string>

namespace koszulkit {

namespace {

long uniform(std::mt19937_64& rng, long lo, long hi)
{
    return std::uniform_int_distribution<long>(lo, hi)(rng);
}

Mat random_int_matrix(std::mt19937_64& rng, std::size_t d, long lo, long hi)
{
    Mat m(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m.set(i, j, Scalar::from_int(uniform(rng, lo, hi), Mode::exact));
    return m;
}

// Product of elementary row operations with integer multipliers: determinant 1.
std::pair<Mat, Mat> random_unimodular(std::mt19937_64& rng, std::size_t d)
{
    Mat p = Mat::identity(d);
    Mat inv = Mat::identity(d);
    if (d < 2) return {p, inv};
    for (int step = 0; step < static_cast<int>(2 * d); ++step) {
        const auto i = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(d) - 1));
        auto j = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(d) - 2));
        if (j >= i) ++j;
        const long c = uniform(rng, -1, 1);
        if (c == 0) continue;
        Mat e = Mat::identity(d);
        e.set(i, j, Scalar::from_int(c, Mode::exact));
        Mat einv = Mat::identity(d);
        einv.set(i, j, Scalar::from_int(-c, Mode::exact));
        p = e * p;
        inv = inv * einv;
    }
    return {p, inv};
}

} // namespace

std::uint64_t seed_from_env(std::uint64_t fallback)
{
    if (const char* s = std::getenv("KOSZULKIT_SEED")) {
        try {
            return std::stoull(s);
        } catch (const std::exception&) {
            return fallback;
        }
    }
    return fallback;
}

Mat random_matrix_polynomial(std::mt19937_64& rng, const Mat& a, unsigned max_degree, bool constant_term)
{
    const std::size_t d = a.rows();
    Mat out(d, d, a.mode());
    Mat pw = Mat::identity(d, a.mode());
    for (unsigned k = 0; k <= max_degree; ++k) {
        if (k > 0) pw = pw * a;
        if (k == 0 && !constant_term) continue;
        const long c = uniform(rng, -2, 2);
        if (c != 0) out = out + Scalar::from_int(c, a.mode()) * pw;
    }
    return out;
}

CommutingTuple random_polynomial_tuple(std::mt19937_64& rng, std::size_t n, std::size_t d)
{
    Mat base = random_int_matrix(rng, d, -2, 2);
    std::vector<Mat> ms;
    for (std::size_t i = 0; i < n; ++i)
        ms.push_back(random_matrix_polynomial(rng, base, 2, uniform(rng, 0, 1) == 1));
    return CommutingTuple::validate(std::move(ms));
}

CommutingTuple random_triangularizable_tuple(std::mt19937_64& rng, std::size_t n, std::size_t d)
{
    Mat upper(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) upper.set(i, j, Scalar::from_int(uniform(rng, -2, 2), Mode::exact));
    auto [p, pinv] = random_unimodular(rng, d);
    const Mat base = p * upper * pinv;
    std::vector<Mat> ms;
    for (std::size_t i = 0; i < n; ++i)
        ms.push_back(random_matrix_polynomial(rng, base, 2, uniform(rng, 0, 1) == 1));
    return CommutingTuple::validate(std::move(ms));
}

std::pair<Mat, Mat> random_invertible_pair(std::mt19937_64& rng, std::size_t d)
{
    Mat upper(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) upper.set(i, j, Scalar::from_int(uniform(rng, -2, 2), Mode::exact));
    // Force 0 into the spectrum of T so ker T^n is not trivial.
    upper.set(0, 0, Scalar::zero(Mode::exact));
    auto [p, pinv] = random_unimodular(rng, d);
    const Mat t = p * upper * pinv;
    long c = uniform(rng, 1, 3);
    if (uniform(rng, 0, 1) == 1) c = -c;
    // q(0) = 0, so every joint eigenvalue (0, q(0) + c) avoids the origin.
    const Mat s = random_matrix_polynomial(rng, t, 3, false) + Scalar::from_int(c, Mode::exact) * Mat::identity(d);
    return {t, s};
}

} // namespace koszulkit
