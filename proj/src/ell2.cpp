#include "koszulkit/ell2.hpp"

#include "koszulkit/errors.hpp"

#include <algorithm>

namespace koszulkit {

namespace {

constexpr double kTailCutoff = 1e-12;
constexpr double kResidualBound = 1e-10;

struct SectionKernel {
    Eigen::MatrixXcd basis;
    double scale = 1.0;
};

// Kernel vectors of the tall section of `op` supported in [0, n - g).
SectionKernel section_kernel(const BandedOperator& op, std::size_t n, std::size_t g, double tau)
{
    const Eigen::MatrixXcd m = op.section(op.image_length(n), n);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double top = sv.size() > 0 ? sv(0) : 0.0;
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > tau * top) ++r;
    const Eigen::Index k = static_cast<Eigen::Index>(n) - r;
    SectionKernel out;
    out.basis.resize(static_cast<Eigen::Index>(n - g), 0);
    if (k == 0) return out;

    const Eigen::MatrixXcd v = svd.matrixV().rightCols(k);
    const Eigen::MatrixXcd tail = v.bottomRows(static_cast<Eigen::Index>(g));
    Eigen::JacobiSVD<Eigen::MatrixXcd> tsvd(tail, Eigen::ComputeFullV);
    const auto& ts = tsvd.singularValues();
    Eigen::Index big = 0;
    while (big < ts.size() && ts(big) > kTailCutoff) ++big;
    if (big == k) return out;
    const Eigen::MatrixXcd w = v * tsvd.matrixV().rightCols(k - big);

    out.basis = w.topRows(static_cast<Eigen::Index>(n - g));
    out.scale = std::max(top, 1.0);
    return out;
}

} // namespace

void TruncationWindow::validate() const
{
    if (N == 0 || N <= G) throw ValidationError("window needs N > G (N = " + std::to_string(N) + ", G = " + std::to_string(G) + ")");
    if (max_N < N) throw ValidationError("window maximum is below the starting size");
}

StabilizedSubspace kernel_of_power(const BandedOperator& t, unsigned m, const TruncationWindow& win, double tau_rank)
{
    win.validate();
    const BandedOperator op = power(t, m);
    const std::size_t g = std::max(win.G, static_cast<std::size_t>(m) * static_cast<std::size_t>(t.bandwidth()));
    std::size_t n = win.N;
    while (n <= g + op.patch_size()) n *= 2;

    SectionKernel here = section_kernel(op, n, g, tau_rank);
    while (2 * n <= win.max_N) {
        SectionKernel next = section_kernel(op, 2 * n, g, tau_rank);
        if (next.basis.cols() == here.basis.cols()) {
            StabilizedSubspace s;
            s.basis = canonical_basis(here.basis);
            s.residual = op.apply(s.basis).norm() / here.scale;
            if (s.residual > kResidualBound)
                throw NotStabilized("kernel residual " + std::to_string(s.residual) + " exceeds 1e-10 at N = " +
                                    std::to_string(n));
            s.dim = static_cast<std::size_t>(here.basis.cols());
            s.certified = true;
            s.N = n;
            s.G = g;
            return s;
        }
        here = std::move(next);
        n *= 2;
    }
    throw NotStabilized("kernel dimension of power " + std::to_string(m) + " did not stabilize up to N = " +
                        std::to_string(win.max_N));
}

IndexCertificate fredholm_index_banded(const BandedOperator& t, const TruncationWindow& win)
{
    const StabilizedSubspace ker = kernel_of_power(t, 1, win);
    const StabilizedSubspace coker = kernel_of_power(t.adjoint(), 1, win);
    IndexCertificate c;
    c.dim_ker = ker.dim;
    c.dim_coker = coker.dim;
    c.index = static_cast<long>(ker.dim) - static_cast<long>(coker.dim);
    c.certified = ker.certified && coker.certified;
    c.N = std::max(ker.N, coker.N);
    return c;
}

double restricted_norm(const BandedOperator& k, const Eigen::MatrixXcd& basis)
{
    if (basis.cols() == 0 || basis.rows() == 0) return 0.0;
    const Eigen::MatrixXcd img = k.apply(basis);
    if (img.size() == 0) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(img);
    return svd.singularValues()(0);
}

Eigen::MatrixXcd canonical_basis(const Eigen::MatrixXcd& q)
{
    // P_rem e_i = Q Q^H e_i - sum_j u_j conj(u_j(i)), tracked incrementally.
    const Eigen::Index n = q.rows(), k = q.cols();
    Eigen::MatrixXcd out(n, k);
    Eigen::VectorXd weight = q.rowwise().squaredNorm();
    for (Eigen::Index c = 0; c < k; ++c) {
        const double best = weight.maxCoeff();
        Eigen::Index pick = 0;
        while (weight(pick) < best * (1.0 - 1e-9)) ++pick;
        Eigen::VectorXcd u = q * q.row(pick).adjoint();
        if (c > 0) u -= out.leftCols(c) * out.row(pick).head(c).adjoint();
        // One re-orthogonalization pass against the vectors already chosen.
        if (c > 0) u -= out.leftCols(c) * (out.leftCols(c).adjoint() * u);
        u /= u.norm();
        u *= std::abs(u(pick)) / u(pick);
        out.col(c) = u;
        weight -= u.cwiseAbs2();
    }
    return out;
}

Eigen::MatrixXcd pad_rows(const Eigen::MatrixXcd& m, std::size_t rows)
{
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows), m.cols());
    const Eigen::Index keep = std::min(m.rows(), static_cast<Eigen::Index>(rows));
    out.topRows(keep) = m.topRows(keep);
    return out;
}

} // namespace koszulkit
