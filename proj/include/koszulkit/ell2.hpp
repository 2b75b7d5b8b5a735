#pragma once

#include "koszulkit/banded.hpp"
#include "koszulkit/exact_linalg.hpp"

#include <Eigen/Dense>

namespace koszulkit {

struct TruncationWindow {
    std::size_t N = 64;
    std::size_t G = 16;
    /// Auto-doubling stops here.
    std::size_t max_N = 1024;

    void validate() const;
};

/// Kernel vectors certified on finite sections. Basis columns are orthonormal
/// and supported in [0, support).
struct StabilizedSubspace {
    Eigen::MatrixXcd basis;
    std::size_t dim = 0;
    bool certified = false;
    /// Section size at which the basis was taken (agreement was checked at 2N).
    std::size_t N = 0;
    std::size_t G = 0;
    double residual = 0.0;

    std::size_t support() const { return static_cast<std::size_t>(basis.rows()); }
};

/// Orthonormal basis of ker T^m. A vector of the tall (N + m w) x N section's
/// kernel whose last G coordinates are all <= 1e-12 counts as a kernel vector;
/// the count must agree at N and 2N, doubling N up to win.max_N. G is widened
/// to m*w when the window's guard is too narrow.
/// Throws NotStabilized.
StabilizedSubspace kernel_of_power(const BandedOperator& t, unsigned m, const TruncationWindow& win = {},
                                   double tau_rank = kDefaultTauRank);

struct IndexCertificate {
    long index = 0;
    std::size_t dim_ker = 0;
    std::size_t dim_coker = 0;
    bool certified = false;
    std::size_t N = 0;
};

/// dim ker T - dim ker T*, both sides certified. Throws NotStabilized.
IndexCertificate fredholm_index_banded(const BandedOperator& t, const TruncationWindow& win = {});

/// Largest singular value of K applied to the (finitely supported) columns.
double restricted_norm(const BandedOperator& k, const Eigen::MatrixXcd& basis);

/// Orthonormal basis of span(q) chosen greedily: repeatedly take the unit
/// vector with the largest projection onto the remaining span (lowest index on
/// ties), normalized to a positive real pivot coordinate.
Eigen::MatrixXcd canonical_basis(const Eigen::MatrixXcd& q);

/// Rows appended with zeros up to `rows`.
Eigen::MatrixXcd pad_rows(const Eigen::MatrixXcd& m, std::size_t rows);

} // namespace koszulkit
