#include "koszulkit/koszul.hpp"

#include "koszulkit/errors.hpp"

#include <algorithm>
#include <sstream>

namespace koszulkit {

namespace {

void require_commutes(const Mat& s, const CommutingTuple& t, double tol)
{
    if (s.rows() != t.d() || s.cols() != t.d())
        throw ShapeError("operator is " + std::to_string(s.rows()) + "x" + std::to_string(s.cols()) +
                         ", tuple acts on dimension " + std::to_string(t.d()));
    for (std::size_t i = 0; i < t.n(); ++i) {
        const Mat c = commutator(s, t[i]);
        const bool ok = c.mode() == Mode::exact ? c.is_zero() : c.frobenius() <= tol;
        if (!ok) {
            std::ostringstream os;
            os << "S does not commute with T_" << i + 1 << " (commutator norm " << c.frobenius() << ")";
            throw NonCommuting(os.str());
        }
    }
}

double default_comm_tol(const std::vector<Mat>& ms)
{
    double scale = 0.0;
    for (const auto& m : ms) scale = std::max(scale, m.frobenius());
    return kDefaultTauComm * std::max(scale, 1.0);
}

// S (x) 1 on X (x) Lambda^p: one copy of S per basis monomial.
Mat tensor_identity(const Mat& s, std::size_t copies)
{
    const std::size_t d = s.rows();
    Mat out(d * copies, d * copies, s.mode());
    for (std::size_t k = 0; k < copies; ++k) out.set_block(k * d, k * d, s);
    return out;
}

Mat zero_map(std::size_t rows, std::size_t cols, Mode mode) { return Mat(rows, cols, mode); }

} // namespace

CommutingTuple CommutingTuple::validate(std::vector<Mat> matrices, double tol)
{
    if (matrices.empty()) throw ShapeError("a commuting tuple needs at least one operator");
    const std::size_t d = matrices.front().rows();
    const Mode mode = matrices.front().mode();
    for (std::size_t i = 0; i < matrices.size(); ++i) {
        const Mat& m = matrices[i];
        if (!m.square() || m.rows() != d)
            throw ShapeError("T_" + std::to_string(i + 1) + " is " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()) + ", expected " + std::to_string(d) + "x" + std::to_string(d));
        if (m.mode() != mode) throw ModeMismatch("tuple mixes exact and float matrices");
    }
    if (tol < 0.0) tol = default_comm_tol(matrices);

    CommutingTuple t(std::move(matrices));
    for (std::size_t i = 0; i < t.n(); ++i)
        for (std::size_t j = i + 1; j < t.n(); ++j) {
            const Mat c = commutator(t[i], t[j]);
            const double norm = c.frobenius();
            const bool ok = mode == Mode::exact ? c.is_zero() : norm <= tol;
            if (!ok) {
                std::ostringstream os;
                os << "T_" << i + 1 << " and T_" << j + 1 << " do not commute (commutator norm " << norm << ")";
                throw NonCommuting(os.str());
            }
            t.norms_.push_back({i + 1, j + 1, norm});
        }
    return t;
}

CommutingTuple CommutingTuple::augmented(const Mat& s, double tol) const
{
    std::vector<Mat> ms = matrices_;
    ms.push_back(s);
    return validate(std::move(ms), tol);
}

CommutingTuple CommutingTuple::shifted_by(const std::vector<Scalar>& z) const
{
    if (z.size() != n()) throw ShapeError("shift point has wrong arity");
    std::vector<Mat> ms;
    ms.reserve(n());
    for (std::size_t i = 0; i < n(); ++i) ms.push_back(z[i] * Mat::identity(d(), mode()) - matrices_[i]);
    // z - T is a polynomial image of T, so it still commutes exactly (exact) or to rounding (float).
    CommutingTuple out(std::move(ms));
    out.norms_ = norms_;
    return out;
}

CommutingTuple CommutingTuple::permuted(const std::vector<std::size_t>& order) const
{
    if (order.size() != n()) throw ShapeError("permutation has wrong length");
    std::vector<Mat> ms;
    for (std::size_t k : order) ms.push_back(matrices_.at(k));
    CommutingTuple out(std::move(ms));
    out.norms_ = norms_;
    return out;
}

std::size_t binomial(std::size_t n, std::size_t k)
{
    if (k > n) return 0;
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

FormBasis::FormBasis(std::size_t n, std::size_t p) : n_(n), p_(p)
{
    if (p > n) return;
    std::vector<std::size_t> combo(p);
    for (std::size_t i = 0; i < p; ++i) combo[i] = i;
    while (true) {
        members_.push_back(combo);
        // Rightmost position that can still advance.
        std::size_t i = p;
        while (i > 0 && combo[i - 1] == n - p + i - 1) --i;
        if (i == 0) return;
        ++combo[i - 1];
        for (std::size_t j = i; j < p; ++j) combo[j] = combo[j - 1] + 1;
    }
}

std::size_t FormBasis::index_of(const std::vector<std::size_t>& combo) const
{
    auto it = std::lower_bound(members_.begin(), members_.end(), combo);
    if (it == members_.end() || *it != combo) return members_.size();
    return static_cast<std::size_t>(it - members_.begin());
}

Mat koszul_differential(const CommutingTuple& t, std::size_t p)
{
    const std::size_t n = t.n();
    const std::size_t d = t.d();
    if (p >= n) throw DegreeError("differential degree " + std::to_string(p) + " outside 0.." + std::to_string(n - 1));
    const FormBasis source(n, p);
    const FormBasis target(n, p + 1);
    Mat out(d * target.size(), d * source.size(), t.mode());
    for (std::size_t s = 0; s < source.size(); ++s) {
        const auto& omega = source[s];
        for (std::size_t i = 0; i < n; ++i) {
            if (std::find(omega.begin(), omega.end(), i) != omega.end()) continue;
            std::vector<std::size_t> wedge = omega;
            wedge.insert(std::upper_bound(wedge.begin(), wedge.end(), i), i);
            const auto smaller = static_cast<std::size_t>(std::count_if(omega.begin(), omega.end(),
                                                                        [i](std::size_t j) { return j < i; }));
            const std::size_t row = target.index_of(wedge);
            out.set_block(row * d, s * d, smaller % 2 == 0 ? t[i] : -t[i]);
        }
    }
    return out;
}

KoszulComplex koszul_complex(const CommutingTuple& t)
{
    KoszulComplex k;
    for (std::size_t p = 0; p < t.n(); ++p) k.differentials.push_back(koszul_differential(t, p));
    return k;
}

CohomologyReport cohomology(const CommutingTuple& t, double tau_rank)
{
    const std::size_t n = t.n();
    const std::size_t d = t.d();
    std::vector<std::size_t> ranks(n);
    for (std::size_t p = 0; p < n; ++p) ranks[p] = rank(koszul_differential(t, p), tau_rank);

    CohomologyReport r;
    for (std::size_t p = 0; p <= n; ++p) {
        const std::size_t chain = d * binomial(n, p);
        const std::size_t out_rank = p < n ? ranks[p] : 0;
        const std::size_t in_rank = p > 0 ? ranks[p - 1] : 0;
        r.dims.push_back(chain - out_rank - in_rank);
        r.index += (p % 2 == 0 ? 1 : -1) * static_cast<long>(r.dims.back());
    }
    r.invertible = std::all_of(r.dims.begin(), r.dims.end(), [](std::size_t x) { return x == 0; });
    return r;
}

Mat induced_map(const Mat& s, const CommutingTuple& t, std::size_t p, double tau_rank)
{
    const std::size_t n = t.n();
    const std::size_t d = t.d();
    if (p > n) throw DegreeError("cohomology degree " + std::to_string(p) + " outside 0.." + std::to_string(n));
    if (s.mode() != t.mode()) throw ModeMismatch("induced map operator and tuple use different modes");
    require_commutes(s, t, default_comm_tol(t.matrices()));

    const std::size_t chain = d * binomial(n, p);
    const Mat cycles = p < n ? kernel_basis(koszul_differential(t, p), tau_rank) : Mat::identity(chain, t.mode());
    const Mat boundaries =
        p > 0 ? column_space_basis(koszul_differential(t, p - 1), tau_rank) : zero_map(chain, 0, t.mode());

    // Extend the boundary basis by cycle columns until the span reaches ker D^p.
    std::vector<std::size_t> reps;
    Mat span = boundaries;
    for (std::size_t j = 0; j < cycles.cols(); ++j) {
        Mat trial = hstack({span, cycles.select_columns({j})}, chain, t.mode());
        if (rank(trial, tau_rank) == trial.cols()) {
            span = std::move(trial);
            reps.push_back(j);
        }
    }
    const Mat representatives = cycles.select_columns(reps);
    const std::size_t h = reps.size();
    if (h == 0) return Mat(0, 0, t.mode());

    const Mat image = tensor_identity(s, binomial(n, p)) * representatives;
    auto coords = solve(span, image);
    if (!coords) throw InvarianceViolation("S (x) 1 does not preserve the cycle space");
    return coords->block(boundaries.cols(), 0, h, h);
}

LesReport augment_les(const CommutingTuple& t, const Mat& s, double tau_rank)
{
    const std::size_t n = t.n();
    const CommutingTuple aug = t.augmented(s);
    const CohomologyReport direct = cohomology(aug, tau_rank);
    const CohomologyReport base = cohomology(t, tau_rank);

    LesReport r;
    r.dims_direct = direct.dims;
    r.index = direct.index;
    for (std::size_t p = 0; p <= n; ++p) r.induced_ranks.push_back(rank(induced_map(s, t, p, tau_rank), tau_rank));

    r.induced_isomorphisms = true;
    for (std::size_t p = 0; p <= n; ++p)
        if (r.induced_ranks[p] != base.dims[p]) r.induced_isomorphisms = false;

    // 0 -> coker(S^ on H^{p-1}) -> H^p(T') -> ker(S^ on H^p) -> 0.
    for (std::size_t p = 0; p <= n + 1; ++p) {
        const std::size_t coker = p > 0 ? base.dims[p - 1] - r.induced_ranks[p - 1] : 0;
        const std::size_t ker = p <= n ? base.dims[p] - r.induced_ranks[p] : 0;
        r.dims_sequence.push_back(coker + ker);
    }
    r.agree = r.dims_sequence == r.dims_direct;
    return r;
}

} // namespace koszulkit
