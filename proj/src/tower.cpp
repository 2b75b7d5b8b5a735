#include "koszulkit/tower.hpp"

#include "koszulkit/errors.hpp"
#include "koszulkit/exact_linalg.hpp"

#include <algorithm>
#include <cmath>

namespace koszulkit {

namespace {

constexpr double kInvarianceBound = 1e-10;
constexpr double kIntertwineBound = 1e-9;
constexpr double kCharpolyBound = 1e-8;
constexpr double kDropBound = 1e-8;

bool invertible(const Eigen::MatrixXcd& a)
{
    if (a.rows() != a.cols()) return false;
    if (a.rows() == 0) return true;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    const auto& sv = svd.singularValues();
    return sv(sv.size() - 1) > kDefaultTauRank * std::max(1.0, sv(0));
}

Eigen::MatrixXcd hcat(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b)
{
    Eigen::MatrixXcd out(std::max(a.rows(), b.rows()), a.cols() + b.cols());
    out << pad_rows(a, static_cast<std::size_t>(out.rows())), pad_rows(b, static_cast<std::size_t>(out.rows()));
    return out;
}

// Columns of `cand` orthogonalized against q and each other (modified
// Gram-Schmidt, two passes); columns that vanish are dropped.
Eigen::MatrixXcd new_directions(const Eigen::MatrixXcd& q, const Eigen::MatrixXcd& cand)
{
    Eigen::MatrixXcd out(cand.rows(), 0);
    for (Eigen::Index c = 0; c < cand.cols(); ++c) {
        Eigen::VectorXcd v = cand.col(c);
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index j = 0; j < q.cols(); ++j) v -= q.col(j) * q.col(j).dot(v);
            for (Eigen::Index j = 0; j < out.cols(); ++j) v -= out.col(j) * out.col(j).dot(v);
        }
        const double nv = v.norm();
        if (nv <= kDropBound) continue;
        out.conservativeResize(Eigen::NoChange, out.cols() + 1);
        out.col(out.cols() - 1) = v / nv;
    }
    return out;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

} // namespace

Eigen::MatrixXcd KernelTower::accumulated(std::size_t n) const
{
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(support), 0);
    for (std::size_t k = 1; k <= n && k < levels.size(); ++k) out = hcat(out, levels[k]);
    return out;
}

KernelTower kernel_tower(const BandedOperator& t, std::size_t max_level, const TruncationWindow& win)
{
    if (max_level < 4) throw ValidationError("kernel tower needs max level >= 4 to locate n0");
    KernelTower tw;
    tw.op = t;
    tw.max_level = max_level;
    tw.index = fredholm_index_banded(t, win).index;
    if (tw.index <= 0)
        throw IndexSignError("kernel tower needs index(T) > 0, got " + std::to_string(tw.index) +
                             "; pass the adjoint to flip the sign");

    std::vector<StabilizedSubspace> ker(max_level + 1);
    for (std::size_t n = 1; n <= max_level; ++n) {
        ker[n] = kernel_of_power(t, static_cast<unsigned>(n), win);
        tw.support = std::max(tw.support, ker[n].support());
    }
    tw.dims.assign(max_level + 1, 0);
    tw.levels.assign(max_level + 1, Eigen::MatrixXcd());
    tw.A.assign(max_level + 1, Eigen::MatrixXcd());
    tw.B = tw.C = tw.A;

    Eigen::MatrixXcd acc(static_cast<Eigen::Index>(tw.support), 0);
    for (std::size_t n = 1; n <= max_level; ++n) {
        const Eigen::MatrixXcd cand = pad_rows(ker[n].basis, tw.support);
        Eigen::MatrixXcd h = new_directions(acc, cand);
        const std::size_t expect = ker[n].dim - (n > 1 ? ker[n - 1].dim : 0);
        if (ker[n].dim < (n > 1 ? ker[n - 1].dim : 0) || static_cast<std::size_t>(h.cols()) != expect)
            throw NotStabilized("ker T^" + std::to_string(n - 1) + " is not nested in ker T^" + std::to_string(n) +
                                " at this window");
        tw.levels[n] = h.cols() > 0 ? canonical_basis(h) : h;
        tw.dims[n] = expect;
        acc = hcat(acc, tw.levels[n]);
    }

    const std::size_t rows = t.image_length(tw.support);
    for (std::size_t n = 2; n <= max_level; ++n) {
        const Eigen::MatrixXcd th = t.apply(tw.levels[n]);
        const Eigen::MatrixXcd prev = pad_rows(tw.levels[n - 1], rows);
        const Eigen::MatrixXcd lower = pad_rows(tw.accumulated(n - 2), rows);
        const Eigen::MatrixXcd upper = pad_rows(tw.accumulated(n - 1), tw.support);
        tw.A[n] = prev.adjoint() * pad_rows(th, rows);
        tw.B[n] = lower.adjoint() * pad_rows(th, rows);
        tw.C[n] = lower.adjoint() * pad_rows(t.apply(upper), rows);
        const Eigen::MatrixXcd rebuilt = prev * tw.A[n] + lower * tw.B[n];
        tw.block_residual = std::max(tw.block_residual, (pad_rows(th, rows) - rebuilt).norm());
    }
    for (std::size_t m = 1; m <= max_level; ++m)
        for (std::size_t n = m + 1; n <= max_level; ++n)
            tw.orthogonality = std::max(tw.orthogonality, max_abs(tw.levels[m].adjoint() * tw.levels[n]));

    if (tw.block_residual > kInvarianceBound * std::max(1.0, static_cast<double>(t.bandwidth())))
        throw InvarianceViolation("T does not map H_n into ker T^{n-1} (residual " +
                                  std::to_string(tw.block_residual) + ")");

    for (std::size_t n = 2; n + 2 <= max_level; ++n)
        if (tw.dims[n] == tw.dims[n + 1] && tw.dims[n] == tw.dims[n + 2] && invertible(tw.A[n]) &&
            invertible(tw.A[n + 1])) {
            tw.n0 = n;
            break;
        }
    if (tw.n0 == 0)
        throw NotStabilized("no stabilization level n0 found up to level " + std::to_string(max_level));
    return tw;
}

CommutantBlocks commutant_blocks(const BandedOperator& t, const BandedOperator& s, const KernelTower& tower)
{
    if (!commutator(t, s).is_zero()) throw NonCommuting("S and T do not commute");
    CommutantBlocks cb;
    const std::size_t top = tower.max_level;
    cb.X.assign(top + 1, Eigen::MatrixXcd());
    cb.Y = cb.Z = cb.X;
    cb.intertwining.assign(top + 1, 0.0);
    const std::size_t rows = s.image_length(tower.support);

    for (std::size_t n = 1; n <= top; ++n) {
        const Eigen::MatrixXcd h = pad_rows(tower.levels[n], rows);
        const Eigen::MatrixXcd below = pad_rows(tower.accumulated(n - 1), rows);
        const Eigen::MatrixXcd all = pad_rows(tower.accumulated(n), rows);
        const Eigen::MatrixXcd sh = pad_rows(s.apply(tower.levels[n]), rows);
        const Eigen::MatrixXcd sb = pad_rows(s.apply(tower.accumulated(n - 1)), rows);

        const Eigen::MatrixXcd sall = hcat(sb, sh);
        const double scale = std::max(1.0, sall.norm());
        cb.invariance = std::max(cb.invariance, (sall - all * (all.adjoint() * sall)).norm() / scale);

        cb.X[n] = h.adjoint() * sh;
        cb.Y[n] = below.adjoint() * sh;
        cb.Z[n] = below.adjoint() * sb;
        cb.upper_block = std::max(cb.upper_block, max_abs(h.adjoint() * sb) / scale);
    }
    if (cb.invariance > kInvarianceBound || cb.upper_block > kInvarianceBound)
        throw InvarianceViolation("ker T^n is not invariant under S at this window (residual " +
                                  std::to_string(std::max(cb.invariance, cb.upper_block)) + ")");

    for (std::size_t n = 2; n <= top; ++n) {
        cb.intertwining[n] = (cb.X[n - 1] * tower.A[n] - tower.A[n] * cb.X[n]).norm();
        if (cb.intertwining[n] > kIntertwineBound)
            throw InvarianceViolation("X_" + std::to_string(n - 1) + " A_" + std::to_string(n) + " != A_" +
                                      std::to_string(n) + " X_" + std::to_string(n) + " (residual " +
                                      std::to_string(cb.intertwining[n]) + ")");
    }

    const Poly ref = characteristic_polynomial(Mat::from_eigen(cb.X[tower.n0]));
    for (std::size_t n = tower.n0 + 1; n <= top; ++n) {
        const Poly cp = characteristic_polynomial(Mat::from_eigen(cb.X[n]));
        const int deg = std::max(cp.degree(), ref.degree());
        for (int k = 0; k <= deg; ++k)
            cb.charpoly_gap = std::max(
                cb.charpoly_gap, std::abs(cp.coeff(static_cast<std::size_t>(k)).to_complex() -
                                          ref.coeff(static_cast<std::size_t>(k)).to_complex()));
    }
    return cb;
}

bool lemma23_check(const Mat& t, const Mat& s, unsigned n, double tau_rank)
{
    const CommutingTuple pair = CommutingTuple::validate({t, s});
    if (!cohomology(pair, tau_rank).invertible)
        throw PreconditionError("(T, S) is not an invertible pair");
    const Mat ker = kernel_basis(power(t, n), tau_rank);
    if (ker.cols() == 0) return true;
    const Mat r = restrict_to_invariant(s, ker);
    return rank(r, tau_rank) == r.rows();
}

std::string to_string(Verdict v) { return v == Verdict::obstructed ? "obstructed" : "inconclusive"; }

ObstructionCertificate obstruction_certificate(const BandedOperator& t, const BandedOperator& k, std::size_t max_level,
                                               const TruncationWindow& win)
{
    ObstructionCertificate oc;
    oc.tower = kernel_tower(t, max_level, win);
    oc.blocks = commutant_blocks(t, k, oc.tower);
    oc.r = spectral_radius(Mat::from_eigen(oc.blocks.X[oc.tower.n0]));
    oc.norms.assign(max_level + 1, 0.0);
    for (std::size_t n = 1; n <= max_level; ++n) oc.norms[n] = restricted_norm(k, oc.tower.levels[n]);
    oc.levels_checked = max_level;

    bool ok = oc.r > kRadiusFloor;
    for (std::size_t n = oc.tower.n0; ok && n <= max_level; ++n)
        ok = oc.norms[n] >= oc.r - kRadiusFloor && oc.tower.dims[n] >= 1;
    oc.verdict = ok ? Verdict::obstructed : Verdict::inconclusive;
    return oc;
}

std::vector<GrowthRow> growth_table(const BandedOperator& t, const std::vector<unsigned>& powers,
                                    std::size_t rank_bound, const TruncationWindow& win)
{
    const long index = fredholm_index_banded(t, win).index;
    if (index == 0) throw IndexZeroError("growth table needs index(T) != 0");
    const BandedOperator adj = t.adjoint();
    std::vector<GrowthRow> rows;
    for (unsigned m : powers) {
        GrowthRow r;
        r.m = m;
        r.dim_ker = kernel_of_power(t, m, win).dim;
        r.dim_coker = kernel_of_power(adj, m, win).dim;
        r.index = static_cast<long>(r.dim_ker) - static_cast<long>(r.dim_coker);
        r.exceeds = std::max(r.dim_ker, r.dim_coker) > rank_bound;
        rows.push_back(r);
    }
    return rows;
}

PairCohomology augmented_pair_cohomology(const BandedOperator& t, const Poly& p, const TruncationWindow& win)
{
    if (!p.coeff(0).is_zero()) throw PreconditionError("augmenting polynomial must satisfy p(0) = 0");
    const BandedOperator pt = poly(p, t);
    const StabilizedSubspace ker = kernel_of_power(t, 1, win);
    const StabilizedSubspace coker = kernel_of_power(t.adjoint(), 1, win);

    auto induced = [&](const Eigen::MatrixXcd& basis, bool check_invariance) {
        if (basis.cols() == 0) return Eigen::MatrixXcd(0, 0);
        const Eigen::MatrixXcd img = pt.apply(basis);
        const Eigen::MatrixXcd b = pad_rows(basis, static_cast<std::size_t>(img.rows()));
        const Eigen::MatrixXcd m = b.adjoint() * img;
        if (check_invariance && (img - b * m).norm() > kInvarianceBound * std::max(1.0, img.norm()))
            throw InvarianceViolation("ker T is not invariant under p(T)");
        return m;
    };
    const Eigen::MatrixXcd on_ker = induced(ker.basis, true);
    const Eigen::MatrixXcd on_coker = induced(coker.basis, false);

    PairCohomology pc;
    pc.dim_ker = ker.dim;
    pc.dim_coker = coker.dim;
    pc.rank_on_ker = on_ker.size() ? rank(Mat::from_eigen(on_ker)) : 0;
    pc.rank_on_coker = on_coker.size() ? rank(Mat::from_eigen(on_coker)) : 0;
    pc.dims = {pc.dim_ker - pc.rank_on_ker, (pc.dim_ker - pc.rank_on_ker) + (pc.dim_coker - pc.rank_on_coker),
               pc.dim_coker - pc.rank_on_coker};
    pc.index = static_cast<long>(pc.dims[0]) - static_cast<long>(pc.dims[1]) + static_cast<long>(pc.dims[2]);
    return pc;
}

} // namespace koszulkit
