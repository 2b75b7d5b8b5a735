#pragma once

#include "koszulkit/exact_linalg.hpp"
#include "koszulkit/mat.hpp"

#include <vector>

namespace koszulkit {

/// Relative commutator tolerance for float tuples: |[T_i, T_j]| <= kDefaultTauComm * max |T_i|.
inline constexpr double kDefaultTauComm = 1e-10;

struct CommutatorNorm {
    std::size_t i = 0;
    std::size_t j = 0;
    double norm = 0.0;
};

/// n pairwise commuting d x d matrices of one arithmetic mode.
class CommutingTuple {
public:
    /// Validates shapes, modes and pairwise commutation. Exact tuples must commute
    /// exactly. For float tuples `tol` is absolute; a negative value selects
    /// kDefaultTauComm * max |T_i|. Throws ShapeError, ModeMismatch, NonCommuting.
    static CommutingTuple validate(std::vector<Mat> matrices, double tol = -1.0);

    std::size_t n() const { return matrices_.size(); }
    std::size_t d() const { return matrices_.front().rows(); }
    Mode mode() const { return matrices_.front().mode(); }
    const Mat& operator[](std::size_t i) const { return matrices_[i]; }
    const std::vector<Mat>& matrices() const { return matrices_; }
    const std::vector<CommutatorNorm>& commutator_norms() const { return norms_; }

    /// (T_1, ..., T_n, s), revalidated.
    CommutingTuple augmented(const Mat& s, double tol = -1.0) const;
    /// (z_1 - T_1, ..., z_n - T_n).
    CommutingTuple shifted_by(const std::vector<Scalar>& z) const;
    CommutingTuple permuted(const std::vector<std::size_t>& order) const;

private:
    explicit CommutingTuple(std::vector<Mat> m) : matrices_(std::move(m)) {}
    std::vector<Mat> matrices_;
    std::vector<CommutatorNorm> norms_;
};

/// Strictly increasing index combinations of size p drawn from {0..n-1},
/// in lexicographic order; the basis monomials e_{i1} ^ ... ^ e_{ip}.
class FormBasis {
public:
    FormBasis(std::size_t n, std::size_t p);
    std::size_t n() const { return n_; }
    std::size_t p() const { return p_; }
    std::size_t size() const { return members_.size(); }
    const std::vector<std::size_t>& operator[](std::size_t k) const { return members_[k]; }
    /// Position of a sorted combination, or size() when absent.
    std::size_t index_of(const std::vector<std::size_t>& combo) const;

private:
    std::size_t n_;
    std::size_t p_;
    std::vector<std::vector<std::size_t>> members_;
};

std::size_t binomial(std::size_t n, std::size_t k);

/// Matrix of D_T from X (x) Lambda^p to X (x) Lambda^{p+1}. Block (e_i ^ w, w)
/// is (-1)^{#{j in w : j < i}} T_i; zero when i is in w. Throws DegreeError.
Mat koszul_differential(const CommutingTuple& t, std::size_t p);

struct KoszulComplex {
    std::vector<Mat> differentials; // D^0 ... D^{n-1}
};

KoszulComplex koszul_complex(const CommutingTuple& t);

struct CohomologyReport {
    std::vector<std::size_t> dims; // dim H^0 ... dim H^n
    long index = 0;
    bool invertible = false;
    bool fredholm = true;
};

CohomologyReport cohomology(const CommutingTuple& t, double tau_rank = kDefaultTauRank);

/// Matrix of the map induced by S (x) 1 on H^p(T), in the representative basis
/// obtained by extending a basis of im D^{p-1} with kernel_basis(D^p) columns.
/// Throws NonCommuting, DegreeError.
Mat induced_map(const Mat& s, const CommutingTuple& t, std::size_t p, double tau_rank = kDefaultTauRank);

struct LesReport {
    std::vector<std::size_t> dims_direct;    // cohomology of (T, S)
    std::vector<std::size_t> dims_sequence;  // coker(S^ on H^{p-1}) + ker(S^ on H^p)
    std::vector<std::size_t> induced_ranks;  // rank of S^ on H^p(T), p = 0..n
    bool agree = false;
    bool induced_isomorphisms = false;       // S^ invertible in every degree
    long index = 0;                          // index of (T, S)
};

LesReport augment_les(const CommutingTuple& t, const Mat& s, double tau_rank = kDefaultTauRank);

} // namespace koszulkit
