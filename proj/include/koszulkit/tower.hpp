#pragma once

#include "koszulkit/ell2.hpp"
#include "koszulkit/koszul.hpp"

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace koszulkit {

/// ker T ⊂ ker T^2 ⊂ ... split into the orthogonal layers
/// H_n = ker T^n ⊖ ker T^{n-1}, with the blocks of T|ker T^n:
///   A_n : H_n -> H_{n-1},  B_n : H_n -> ker T^{n-2},  C_n : ker T^{n-1} -> ker T^{n-2}.
/// Vectors are stored as columns of length `support`. Per-level vectors are
/// indexed by n, entries below the first meaningful level are empty.
struct KernelTower {
    BandedOperator op;
    std::size_t max_level = 0;
    std::size_t support = 0;
    long index = 0;
    std::vector<std::size_t> dims;       // dims[n], n = 1..max_level
    std::vector<Eigen::MatrixXcd> levels; // levels[n] = basis of H_n
    std::vector<Eigen::MatrixXcd> A, B, C;
    std::size_t n0 = 0;
    /// Largest |T H_n - (H_{n-1} A_n + K_{n-2} B_n)| over n.
    double block_residual = 0.0;
    /// Largest |<H_m, H_n>| for m != n.
    double orthogonality = 0.0;

    /// Orthonormal basis of ker T^n: [H_1 ... H_n] (support x dim).
    Eigen::MatrixXcd accumulated(std::size_t n) const;
};

/// Throws IndexSignError when index(T) <= 0, NotStabilized when the window
/// cannot certify a kernel or no n0 is found within max_level (n0 needs two
/// levels of lookahead).
KernelTower kernel_tower(const BandedOperator& t, std::size_t max_level, const TruncationWindow& win = {});

/// Compressions of S|ker T^n = [[X_n, 0], [Y_n, Z_n]] on H_n ⊕ ker T^{n-1}.
struct CommutantBlocks {
    std::vector<Eigen::MatrixXcd> X, Y, Z;
    /// |X_{n-1} A_n - A_n X_n| per level (n >= 2).
    std::vector<double> intertwining;
    /// Largest upper-right block and invariance residual seen.
    double upper_block = 0.0;
    double invariance = 0.0;
    /// Largest coefficient gap between char(X_n) and char(X_{n0}) for n > n0.
    double charpoly_gap = 0.0;
};

/// Throws NonCommuting unless TS = ST exactly, InvarianceViolation when the
/// computed ker T^n is not S-invariant or the intertwining fails.
CommutantBlocks commutant_blocks(const BandedOperator& t, const BandedOperator& s, const KernelTower& tower);

/// Matrix pair (T, S): requires the pair to commute (NonCommuting) and be
/// invertible (PreconditionError); true iff S restricted to ker T^n is
/// invertible on ker T^n.
bool lemma23_check(const Mat& t, const Mat& s, unsigned n, double tau_rank = kDefaultTauRank);

enum class Verdict { obstructed, inconclusive };
std::string to_string(Verdict v);

struct ObstructionCertificate {
    KernelTower tower;
    CommutantBlocks blocks;
    double r = 0.0;
    std::vector<double> norms; // norms[n] = |K restricted to H_n|
    std::size_t levels_checked = 0;
    Verdict verdict = Verdict::inconclusive;
};

inline constexpr double kRadiusFloor = 1e-8;

ObstructionCertificate obstruction_certificate(const BandedOperator& t, const BandedOperator& k, std::size_t max_level,
                                               const TruncationWindow& win = {});

struct GrowthRow {
    unsigned m = 0;
    std::size_t dim_ker = 0;
    std::size_t dim_coker = 0;
    long index = 0;
    bool exceeds = false;
};

/// dim ker T^m and dim coker T^m (= dim ker T*^m) for each m; `exceeds` marks
/// rows where either dimension is larger than rank_bound. Throws
/// IndexZeroError when index(T) = 0.
std::vector<GrowthRow> growth_table(const BandedOperator& t, const std::vector<unsigned>& powers,
                                    std::size_t rank_bound, const TruncationWindow& win = {});

struct PairCohomology {
    std::vector<std::size_t> dims; // H^0, H^1, H^2 of (T, p(T))
    long index = 0;
    std::size_t dim_ker = 0;
    std::size_t dim_coker = 0;
    std::size_t rank_on_ker = 0;
    std::size_t rank_on_coker = 0;
};

/// Cohomology of (T, p(T)) through the long exact sequence, using the maps
/// p(T) induces on ker T and on coker T ≅ ker T*. Requires p(0) = 0
/// (PreconditionError otherwise).
PairCohomology augmented_pair_cohomology(const BandedOperator& t, const Poly& p, const TruncationWindow& win = {});

} // namespace koszulkit
