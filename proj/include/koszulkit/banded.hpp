#pragma once

#include "koszulkit/mat.hpp"
#include "koszulkit/polynomial.hpp"

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <vector>

namespace koszulkit {

/// One tail contribution on a diagonal: cycle[t mod L] * num(t) / den(t).
/// The cycle is indexed by the absolute diagonal position t, not by the
/// distance from the end of the prefix.
struct TailTerm {
    std::vector<GaussRational> cycle;
    Poly num{Poly::constant(Scalar(GaussRational(1)))};
    Poly den{Poly::constant(Scalar(GaussRational(1)))};

    /// den(t) == 0 gives nullopt.
    std::optional<GaussRational> at(std::size_t t) const;
};

/// Values along one diagonal. Position t on offset k is the entry
/// (t - min(0,k), t + max(0,k)), i.e. t = min(row, col).
struct DiagonalRule {
    std::vector<GaussRational> prefix;
    std::vector<TailTerm> tail;

    GaussRational at(std::size_t t) const;

    static DiagonalRule constant(GaussRational c);
    /// prefix, then `period` repeated forever.
    static DiagonalRule periodic(std::vector<GaussRational> prefix, std::vector<GaussRational> period);
    /// c * num(t) / den(t) for every t >= prefix length.
    static DiagonalRule rational(std::vector<GaussRational> prefix, const Poly& num, const Poly& den);

    /// Tail values tend to zero on every residue class.
    bool decays() const;
    /// Every residue class tends to a nonzero limit.
    bool bounded_below_eventually() const;
};

/// Operator on l2(N) with finitely many eventually-periodic (times rational)
/// diagonals plus a finite block `patch` on [0,P)^2. Entries are exact.
///
/// Normalized form: the patch holds only entries outside the band; in-band
/// corrections are folded into the prefixes, and prefixes are trimmed where
/// they agree with the tail.
class BandedOperator {
public:
    BandedOperator() = default;
    explicit BandedOperator(std::map<long, DiagonalRule> diagonals, Mat patch = Mat(),
                            std::optional<bool> fredholm = std::nullopt);

    static BandedOperator zero();
    static BandedOperator identity();
    /// S e_k = e_{k+1}.
    static BandedOperator shift();
    /// S* e_k = e_{k-1}, S* e_0 = 0.
    static BandedOperator adjoint_shift();
    /// e_k -> w_k e_{k+1}.
    static BandedOperator weighted_shift(DiagonalRule weights);
    /// Toeplitz operator of a Laurent polynomial: entry(i, j) = c_{i-j}.
    static BandedOperator toeplitz(const std::map<long, GaussRational>& symbol);
    static BandedOperator diagonal(DiagonalRule rule);

    long bandwidth() const { return w_; }
    std::size_t patch_size() const { return patch_.rows(); }
    const std::map<long, DiagonalRule>& diagonals() const { return diag_; }
    const Mat& patch() const { return patch_; }
    /// Known Fredholm status (catalog operators and closure rules), if any.
    std::optional<bool> fredholm() const { return fredholm_; }
    BandedOperator with_fredholm(std::optional<bool> flag) const;

    GaussRational entry(std::size_t i, std::size_t j) const;
    /// Rows [0, rows) x cols [0, cols).
    Mat section_exact(std::size_t rows, std::size_t cols) const;
    Eigen::MatrixXcd section(std::size_t rows, std::size_t cols) const;
    /// Image of finitely supported column vectors; the result has enough rows
    /// to hold the whole image.
    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& v) const;
    /// Number of rows needed to hold the image of vectors supported in [0, len).
    std::size_t image_length(std::size_t len) const;

    bool is_zero() const;
    /// Every diagonal tends to zero (the patch is finite rank).
    bool is_compact() const;

    BandedOperator adjoint() const;
    BandedOperator scaled(const GaussRational& c) const;

    friend BandedOperator operator+(const BandedOperator& a, const BandedOperator& b);
    friend BandedOperator operator-(const BandedOperator& a, const BandedOperator& b);
    friend BandedOperator operator*(const BandedOperator& a, const BandedOperator& b);
    friend bool operator==(const BandedOperator& a, const BandedOperator& b);

private:
    void normalize();
    /// Entry of the product a*b by direct summation.
    static GaussRational product_entry(const BandedOperator& a, const BandedOperator& b, std::size_t i,
                                       std::size_t j);
    std::size_t max_prefix() const;

    std::map<long, DiagonalRule> diag_;
    Mat patch_;
    long w_ = 0;
    std::optional<bool> fredholm_;
};

BandedOperator power(const BandedOperator& a, unsigned m);
/// p(a) by Horner's rule; p must be exact.
BandedOperator poly(const Poly& p, const BandedOperator& a);
BandedOperator commutator(const BandedOperator& a, const BandedOperator& b);

} // namespace koszulkit
