#include "koszulkit/exact_linalg.hpp"

#include "koszulkit/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace koszulkit {

namespace {

using Rows = std::vector<std::vector<GaussRational>>;

Rows exact_rows(const Mat& m)
{
    Rows a(m.rows(), std::vector<GaussRational>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = m(i, j).exact();
    return a;
}

Eigen::BDCSVD<Eigen::MatrixXcd> svd_of(const Mat& m, unsigned options)
{
    return Eigen::BDCSVD<Eigen::MatrixXcd>(m.to_eigen(), options);
}

std::size_t numeric_rank(const Eigen::VectorXd& sv, double tau)
{
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    const double cut = tau * sv(0);
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) ++r;
    return r;
}

} // namespace

Echelon bareiss_echelon(const Mat& m)
{
    if (m.mode() != Mode::exact) throw ModeMismatch("fraction-free elimination needs exact entries");
    Rows a = exact_rows(m);
    const std::size_t nr = m.rows();
    const std::size_t nc = m.cols();
    Echelon e;
    e.col_order.resize(nc);
    std::iota(e.col_order.begin(), e.col_order.end(), std::size_t{0});

    GaussRational prev(1);
    for (std::size_t k = 0; k < std::min(nr, nc); ++k) {
        std::size_t pi = nr, pj = nc;
        mpq_class best = 0;
        for (std::size_t i = k; i < nr; ++i)
            for (std::size_t j = k; j < nc; ++j) {
                if (a[i][j].is_zero()) continue;
                mpq_class mag = a[i][j].norm2();
                if (pi == nr || mag > best) {
                    best = mag;
                    pi = i;
                    pj = j;
                }
            }
        if (pi == nr) break;
        std::swap(a[k], a[pi]);
        if (pj != k) {
            for (auto& row : a) std::swap(row[k], row[pj]);
            std::swap(e.col_order[k], e.col_order[pj]);
        }
        const GaussRational pivot = a[k][k];
        for (std::size_t i = k + 1; i < nr; ++i) {
            const GaussRational lead = a[i][k];
            for (std::size_t j = k + 1; j < nc; ++j) {
                GaussRational v = a[i][j] * pivot;
                if (!lead.is_zero()) v -= lead * a[k][j];
                v /= prev;
                a[i][j] = std::move(v);
            }
            a[i][k] = GaussRational(0);
        }
        prev = pivot;
        ++e.rank;
    }
    a.resize(e.rank);
    e.upper = std::move(a);
    return e;
}

std::size_t rank(const Mat& m, double tau_rank)
{
    if (m.empty()) return 0;
    if (m.mode() == Mode::exact) return bareiss_echelon(m).rank;
    return numeric_rank(svd_of(m, 0).singularValues(), tau_rank);
}

Mat kernel_basis(const Mat& m, double tau_rank)
{
    const std::size_t nc = m.cols();
    if (m.rows() == 0 || nc == 0) return Mat::identity(nc, m.mode());

    if (m.mode() == Mode::floating) {
        auto svd = svd_of(m, Eigen::ComputeFullV);
        const std::size_t r = numeric_rank(svd.singularValues(), tau_rank);
        const Eigen::MatrixXcd& v = svd.matrixV();
        return Mat::from_eigen(v.rightCols(static_cast<Eigen::Index>(nc - r)));
    }

    const Echelon e = bareiss_echelon(m);
    const std::size_t r = e.rank;
    std::vector<std::size_t> free_pos(nc - r);
    std::iota(free_pos.begin(), free_pos.end(), r);
    std::sort(free_pos.begin(), free_pos.end(),
              [&](std::size_t x, std::size_t y) { return e.col_order[x] < e.col_order[y]; });

    Mat basis(nc, nc - r, Mode::exact);
    for (std::size_t b = 0; b < free_pos.size(); ++b) {
        std::vector<GaussRational> x(nc);
        x[free_pos[b]] = GaussRational(1);
        for (std::size_t k = r; k-- > 0;) {
            GaussRational s;
            for (std::size_t j = k + 1; j < nc; ++j)
                if (!x[j].is_zero() && !e.upper[k][j].is_zero()) s += e.upper[k][j] * x[j];
            x[k] = -s / e.upper[k][k];
        }
        for (std::size_t p = 0; p < nc; ++p) basis.set(e.col_order[p], b, Scalar(x[p]));
    }
    return basis;
}

Mat column_space_basis(const Mat& m, double tau_rank)
{
    if (m.empty()) return Mat(m.rows(), 0, m.mode());
    std::vector<std::size_t> cols;
    if (m.mode() == Mode::exact) {
        const Echelon e = bareiss_echelon(m);
        cols.assign(e.col_order.begin(), e.col_order.begin() + static_cast<long>(e.rank));
        std::sort(cols.begin(), cols.end());
    } else {
        // Greedy left-to-right selection keeps the lowest-index independent columns.
        for (std::size_t j = 0; j < m.cols(); ++j) {
            std::vector<std::size_t> trial = cols;
            trial.push_back(j);
            if (rank(m.select_columns(trial), tau_rank) == trial.size()) cols = std::move(trial);
        }
    }
    return m.select_columns(cols);
}

std::optional<Mat> solve(const Mat& a, const Mat& b, double tol)
{
    if (a.rows() != b.rows()) throw ShapeError("solve: right-hand side has wrong row count");
    if (a.mode() != b.mode()) throw ModeMismatch("solve: mixed arithmetic modes");
    const std::size_t n = a.cols();
    const std::size_t k = b.cols();
    if (a.rows() == 0) return Mat(n, k, a.mode());

    if (a.mode() == Mode::floating) {
        const Eigen::MatrixXcd ae = a.to_eigen();
        const Eigen::MatrixXcd be = b.to_eigen();
        Eigen::MatrixXcd x = ae.completeOrthogonalDecomposition().solve(be);
        const double resid = (ae * x - be).norm();
        if (resid > tol * std::max(1.0, be.norm())) return std::nullopt;
        return Mat::from_eigen(x);
    }

    // Gauss-Jordan on [a | b], pivoting within a's columns only.
    Rows m = exact_rows(hstack({a, b}, a.rows(), Mode::exact));
    const std::size_t nr = a.rows();
    std::vector<std::size_t> pivot_col;
    std::size_t row = 0;
    for (std::size_t c = 0; c < n && row < nr; ++c) {
        std::size_t best = nr;
        mpq_class mag = 0;
        for (std::size_t i = row; i < nr; ++i) {
            if (m[i][c].is_zero()) continue;
            mpq_class v = m[i][c].norm2();
            if (best == nr || v > mag) {
                mag = v;
                best = i;
            }
        }
        if (best == nr) continue;
        std::swap(m[row], m[best]);
        const GaussRational p = m[row][c];
        for (auto& v : m[row]) v /= p;
        for (std::size_t i = 0; i < nr; ++i) {
            if (i == row || m[i][c].is_zero()) continue;
            const GaussRational f = m[i][c];
            for (std::size_t j = c; j < n + k; ++j)
                if (!m[row][j].is_zero()) m[i][j] -= f * m[row][j];
        }
        pivot_col.push_back(c);
        ++row;
    }
    for (std::size_t i = row; i < nr; ++i)
        for (std::size_t j = n; j < n + k; ++j)
            if (!m[i][j].is_zero()) return std::nullopt;

    Mat x(n, k, Mode::exact);
    for (std::size_t r = 0; r < pivot_col.size(); ++r)
        for (std::size_t j = 0; j < k; ++j) x.set(pivot_col[r], j, Scalar(m[r][n + j]));
    return x;
}

Mat restrict_to_invariant(const Mat& t, const Mat& basis, double tol)
{
    if (basis.cols() == 0) return Mat(0, 0, t.mode());
    auto m = solve(basis, t * basis, tol);
    if (!m) throw InvarianceViolation("subspace is not invariant under the operator");
    return *m;
}

Poly characteristic_polynomial(const Mat& a)
{
    if (!a.square()) throw ShapeError("characteristic polynomial of a non-square matrix");
    const Mode mode = a.mode();
    const std::size_t n = a.rows();
    if (n == 0) return Poly::constant(Scalar::one(mode));

    // Highest-degree-first coefficient vectors, built from the bottom-right corner up.
    std::vector<Scalar> p{Scalar::one(mode), -a(n - 1, n - 1)};
    for (std::size_t s = n - 1; s-- > 0;) {
        const std::size_t m = n - s - 1;
        const Mat row = a.block(s, s + 1, 1, m);
        const Mat sub = a.block(s + 1, s + 1, m, m);
        Mat col = a.block(s + 1, s, m, 1);

        std::vector<Scalar> t{Scalar::one(mode), -a(s, s)};
        for (std::size_t k = 0; k < m; ++k) {
            t.push_back(-(row * col)(0, 0));
            if (k + 1 < m) col = sub * col;
        }
        std::vector<Scalar> next(m + 2, Scalar::zero(mode));
        for (std::size_t i = 0; i < m + 2; ++i)
            for (std::size_t j = 0; j <= std::min(i, m); ++j) next[i] += t[i - j] * p[j];
        p = std::move(next);
    }
    std::reverse(p.begin(), p.end());
    return Poly(std::move(p), mode);
}

double spectral_radius(const Mat& m)
{
    if (!m.square()) throw ShapeError("spectral radius of a non-square matrix");
    if (m.rows() == 0) return 0.0;
    double r = 0.0;
    if (m.mode() == Mode::exact) {
        for (const auto& z : numeric_roots(squarefree_part(characteristic_polynomial(m)))) r = std::max(r, std::abs(z));
        return r;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m.to_eigen(), false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) r = std::max(r, std::abs(es.eigenvalues()(i)));
    return r;
}

bool intertwine_verify(const Mat& a, const Mat& x, const Mat& y, double tol)
{
    if (y.cols() != a.rows() || a.cols() != x.rows() || !x.square() || !y.square())
        throw ShapeError("intertwining shapes do not compose");
    const Mat diff = y * a - a * x;
    if (diff.mode() == Mode::exact) return diff.is_zero();
    return diff.frobenius() <= tol;
}

} // namespace koszulkit
