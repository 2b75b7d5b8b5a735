#include "koszulkit/mat.hpp"

#include "koszulkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace koszulkit {

namespace {

std::string shape(const Mat& m)
{
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_mode(const Mat& a, const Mat& b)
{
    if (a.mode() != b.mode()) throw ModeMismatch("matrices of mixed arithmetic modes");
}

} // namespace

Mat::Mat(std::size_t rows, std::size_t cols, Mode mode)
    : rows_(rows), cols_(cols), mode_(mode), entries_(rows * cols, Scalar::zero(mode))
{
}

Mat::Mat(std::size_t rows, std::size_t cols, std::vector<Scalar> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries))
{
    if (entries_.size() != rows * cols)
        throw ShapeError("matrix literal has " + std::to_string(entries_.size()) + " entries, expected " +
                         std::to_string(rows * cols));
    mode_ = entries_.empty() ? Mode::exact : entries_.front().mode();
    for (const auto& e : entries_)
        if (e.mode() != mode_) throw ModeMismatch("matrix entries of mixed arithmetic modes");
}

Mat Mat::identity(std::size_t n, Mode mode)
{
    Mat m(n, n, mode);
    for (std::size_t i = 0; i < n; ++i) m.entries_[i * n + i] = Scalar::one(mode);
    return m;
}

Mat Mat::from_ints(std::size_t rows, std::size_t cols, std::initializer_list<long> values, Mode mode)
{
    std::vector<Scalar> e;
    e.reserve(values.size());
    for (long v : values) e.push_back(Scalar::from_int(v, mode));
    Mat m(rows, cols, std::move(e));
    m.mode_ = mode;
    return m;
}

Mat Mat::from_eigen(const Eigen::MatrixXcd& m)
{
    Mat out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()), Mode::floating);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out.entries_[static_cast<std::size_t>(i) * out.cols_ + static_cast<std::size_t>(j)] = Scalar(m(i, j));
    return out;
}

Mat Mat::column(const std::vector<Scalar>& v)
{
    return Mat(v.size(), 1, v);
}

void Mat::set(std::size_t i, std::size_t j, Scalar v)
{
    if (v.mode() != mode_) throw ModeMismatch("assigning a " + koszulkit::to_string(v.mode()) + " entry into a " +
                                              koszulkit::to_string(mode_) + " matrix");
    entries_[i * cols_ + j] = std::move(v);
}

Mat Mat::to_mode(Mode mode) const
{
    if (mode == mode_) return *this;
    Mat out(rows_, cols_, mode);
    for (std::size_t k = 0; k < entries_.size(); ++k) out.entries_[k] = entries_[k].to_mode(mode);
    return out;
}

Eigen::MatrixXcd Mat::to_eigen() const
{
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*this)(i, j).to_complex();
    return m;
}

std::vector<Scalar> Mat::col(std::size_t j) const
{
    std::vector<Scalar> v;
    v.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v.push_back((*this)(i, j));
    return v;
}

Mat Mat::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const
{
    if (r0 + nr > rows_ || c0 + nc > cols_) throw ShapeError("block exceeds matrix " + shape(*this));
    Mat out(nr, nc, mode_);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) out.entries_[i * nc + j] = (*this)(r0 + i, c0 + j);
    return out;
}

void Mat::set_block(std::size_t r0, std::size_t c0, const Mat& b)
{
    require_mode(*this, b);
    if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw ShapeError("block exceeds matrix " + shape(*this));
    for (std::size_t i = 0; i < b.rows_; ++i)
        for (std::size_t j = 0; j < b.cols_; ++j) entries_[(r0 + i) * cols_ + c0 + j] = b(i, j);
}

Mat Mat::select_columns(const std::vector<std::size_t>& idx) const
{
    Mat out(rows_, idx.size(), mode_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < idx.size(); ++k) out.entries_[i * idx.size() + k] = (*this)(i, idx[k]);
    return out;
}

Mat Mat::adjoint() const
{
    Mat out(cols_, rows_, mode_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out.entries_[j * rows_ + i] = (*this)(i, j).conj();
    return out;
}

Mat Mat::transpose() const
{
    Mat out(cols_, rows_, mode_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out.entries_[j * rows_ + i] = (*this)(i, j);
    return out;
}

Mat Mat::operator-() const
{
    Mat out = *this;
    for (auto& e : out.entries_) e = -e;
    return out;
}

bool Mat::is_zero(double tol) const
{
    return std::all_of(entries_.begin(), entries_.end(), [tol](const Scalar& s) { return s.is_zero(tol); });
}

double Mat::max_abs() const
{
    double m = 0.0;
    for (const auto& e : entries_) m = std::max(m, e.abs());
    return m;
}

double Mat::frobenius() const
{
    double s = 0.0;
    for (const auto& e : entries_) s += std::norm(e.to_complex());
    return std::sqrt(s);
}

double Mat::norm2() const
{
    if (empty()) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen());
    return svd.singularValues()(0);
}

Mat operator+(const Mat& a, const Mat& b)
{
    require_mode(a, b);
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw ShapeError("cannot add " + shape(a) + " and " + shape(b));
    Mat out = a;
    for (std::size_t k = 0; k < out.entries_.size(); ++k) out.entries_[k] += b.entries_[k];
    return out;
}

Mat operator-(const Mat& a, const Mat& b)
{
    require_mode(a, b);
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
        throw ShapeError("cannot subtract " + shape(a) + " and " + shape(b));
    Mat out = a;
    for (std::size_t k = 0; k < out.entries_.size(); ++k) out.entries_[k] -= b.entries_[k];
    return out;
}

Mat operator*(const Mat& a, const Mat& b)
{
    require_mode(a, b);
    if (a.cols_ != b.rows_) throw ShapeError("cannot multiply " + shape(a) + " by " + shape(b));
    Mat out(a.rows_, b.cols_, a.mode_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Scalar& aik = a(i, k);
            if (aik.is_zero()) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) {
                const Scalar& bkj = b(k, j);
                if (bkj.is_zero()) continue;
                out.entries_[i * b.cols_ + j] += aik * bkj;
            }
        }
    return out;
}

Mat operator*(const Scalar& s, const Mat& a)
{
    if (s.mode() != a.mode_) throw ModeMismatch("scaling a matrix by a scalar of another mode");
    Mat out = a;
    for (auto& e : out.entries_) e *= s;
    return out;
}

bool identical(const Mat& a, const Mat& b)
{
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_ || a.mode_ != b.mode_) return false;
    for (std::size_t k = 0; k < a.entries_.size(); ++k)
        if (!a.entries_[k].identical(b.entries_[k])) return false;
    return true;
}

Mat hstack(const std::vector<Mat>& parts, std::size_t rows, Mode mode)
{
    std::size_t cols = 0;
    for (const auto& p : parts) {
        if (p.rows() != rows) throw ShapeError("hstack row mismatch");
        cols += p.cols();
    }
    Mat out(rows, cols, mode);
    std::size_t c = 0;
    for (const auto& p : parts) {
        if (p.cols() > 0) out.set_block(0, c, p);
        c += p.cols();
    }
    return out;
}

Mat vstack(const std::vector<Mat>& parts, std::size_t cols, Mode mode)
{
    std::size_t rows = 0;
    for (const auto& p : parts) {
        if (p.cols() != cols) throw ShapeError("vstack column mismatch");
        rows += p.rows();
    }
    Mat out(rows, cols, mode);
    std::size_t r = 0;
    for (const auto& p : parts) {
        if (p.rows() > 0) out.set_block(r, 0, p);
        r += p.rows();
    }
    return out;
}

Mat power(const Mat& a, unsigned k)
{
    if (!a.square()) throw ShapeError("power of a non-square matrix");
    Mat result = Mat::identity(a.rows(), a.mode());
    Mat base = a;
    while (k > 0) {
        if (k & 1u) result = result * base;
        k >>= 1u;
        if (k > 0) base = base * base;
    }
    return result;
}

Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

} // namespace koszulkit
