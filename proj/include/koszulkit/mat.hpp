#pragma once

#include "koszulkit/scalar.hpp"

#include <Eigen/Dense>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace koszulkit {

/// Dense row-major matrix of Scalars sharing one arithmetic mode.
class Mat {
public:
    Mat() = default;
    /// rows x cols zero matrix.
    Mat(std::size_t rows, std::size_t cols, Mode mode = Mode::exact);
    /// Takes ownership of row-major entries; throws ShapeError / ModeMismatch.
    Mat(std::size_t rows, std::size_t cols, std::vector<Scalar> entries);

    static Mat identity(std::size_t n, Mode mode = Mode::exact);
    /// Integer literal, row-major. Handy for fixtures.
    static Mat from_ints(std::size_t rows, std::size_t cols, std::initializer_list<long> values,
                         Mode mode = Mode::exact);
    static Mat from_eigen(const Eigen::MatrixXcd& m);
    static Mat column(const std::vector<Scalar>& v);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }
    Mode mode() const { return mode_; }

    const Scalar& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    void set(std::size_t i, std::size_t j, Scalar v);
    const std::vector<Scalar>& entries() const { return entries_; }

    Mat to_mode(Mode mode) const;
    Eigen::MatrixXcd to_eigen() const;

    std::vector<Scalar> col(std::size_t j) const;
    Mat block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const Mat& b);
    Mat select_columns(const std::vector<std::size_t>& idx) const;

    Mat adjoint() const;
    Mat transpose() const;
    Mat operator-() const;

    /// Exact-zero test in exact mode; max |entry| <= tol in float mode.
    bool is_zero(double tol = 0.0) const;
    double max_abs() const;
    double frobenius() const;
    /// Largest singular value (float evaluation).
    double norm2() const;

    friend Mat operator+(const Mat& a, const Mat& b);
    friend Mat operator-(const Mat& a, const Mat& b);
    friend Mat operator*(const Mat& a, const Mat& b);
    friend Mat operator*(const Scalar& s, const Mat& a);
    friend bool identical(const Mat& a, const Mat& b);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Mode mode_ = Mode::exact;
    std::vector<Scalar> entries_;
};

Mat hstack(const std::vector<Mat>& parts, std::size_t rows, Mode mode);
Mat vstack(const std::vector<Mat>& parts, std::size_t cols, Mode mode);
/// Integer power by repeated squaring; requires a square matrix.
Mat power(const Mat& a, unsigned k);
/// a*b - b*a.
Mat commutator(const Mat& a, const Mat& b);

} // namespace koszulkit
