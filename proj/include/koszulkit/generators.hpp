#pragma once

#include "koszulkit/koszul.hpp"

#include <cstdint>
#include <random>

namespace koszulkit {

/// Seed for randomized tuple generation: KOSZULKIT_SEED when set, else `fallback`.
std::uint64_t seed_from_env(std::uint64_t fallback);

/// Commuting tuple of integer polynomials (degree <= 2, no constant term half the
/// time) in one random integer matrix whose entries lie in [-2, 2]. Exact mode.
CommutingTuple random_polynomial_tuple(std::mt19937_64& rng, std::size_t n, std::size_t d);

/// Commuting tuple of polynomials in one upper-triangular integer matrix, conjugated
/// by a random unimodular integer matrix. Eigenvalues are integers, so exact-mode
/// joint spectra are computable.
CommutingTuple random_triangularizable_tuple(std::mt19937_64& rng, std::size_t n, std::size_t d);

/// Random integer polynomial in a matrix: sum_k c_k a^k, degree <= max_degree.
Mat random_matrix_polynomial(std::mt19937_64& rng, const Mat& a, unsigned max_degree, bool constant_term);

/// (T, q(T) + c) with T singular, q(0) = 0 and c != 0: an invertible
/// commuting pair whose kernel tower is not trivial.
std::pair<Mat, Mat> random_invertible_pair(std::mt19937_64& rng, std::size_t d);

} // namespace koszulkit
