#pragma once

#include "koszulkit/mat.hpp"
#include "koszulkit/polynomial.hpp"

#include <optional>
#include <vector>

namespace koszulkit {

/// Relative rank threshold for float mode: singular values at or below
/// kDefaultTauRank * sigma_max count as zero.
inline constexpr double kDefaultTauRank = 1e-10;

/// Row echelon data from fraction-free elimination with full pivoting.
struct Echelon {
    std::size_t rank = 0;
    /// Original column index of each permuted column; the first `rank` are pivots.
    std::vector<std::size_t> col_order;
    /// rank x cols upper-trapezoidal factor in permuted column order.
    std::vector<std::vector<GaussRational>> upper;
};

/// Bareiss elimination over the Gaussian rationals. Pivot: largest |entry|,
/// ties broken by lowest row, then lowest column.
Echelon bareiss_echelon(const Mat& m);

std::size_t rank(const Mat& m, double tau_rank = kDefaultTauRank);

/// Columns form a basis of ker m (cols - rank of them).
/// Exact mode: each vector has a 1 in one free coordinate and 0 in the others.
/// Float mode: orthonormal right singular vectors.
Mat kernel_basis(const Mat& m, double tau_rank = kDefaultTauRank);

/// Columns of m forming a basis of its column space (ascending original order).
Mat column_space_basis(const Mat& m, double tau_rank = kDefaultTauRank);

/// Some x with a x = b, or nullopt if the system is inconsistent.
/// Float mode accepts x when |a x - b| <= tol * max(1, |b|).
std::optional<Mat> solve(const Mat& a, const Mat& b, double tol = 1e-9);

/// Matrix M with t * basis = basis * M for a basis of a t-invariant subspace.
/// Throws InvarianceViolation when the span is not invariant.
Mat restrict_to_invariant(const Mat& t, const Mat& basis, double tol = 1e-9);

/// det(x I - m), monic, lowest-degree coefficient first (Berkowitz, division free).
Poly characteristic_polynomial(const Mat& m);

/// Largest eigenvalue modulus. Exact input: roots of the squarefree part of the
/// exact characteristic polynomial. Float input: eigenvalues of m directly.
double spectral_radius(const Mat& m);

/// |y a - a x| <= tol (exactly zero for exact operands).
bool intertwine_verify(const Mat& a, const Mat& x, const Mat& y, double tol);

} // namespace koszulkit
