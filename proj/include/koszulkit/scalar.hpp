#pragma once

#include <complex>
#include <gmpxx.h>
#include <string>
#include <variant>

namespace koszulkit {

/// Arithmetic mode of a computation. Exact mode never rounds.
enum class Mode { exact, floating };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& text);

/// a + b i with a, b arbitrary-precision rationals.
struct GaussRational {
    mpq_class re{0};
    mpq_class im{0};

    GaussRational() = default;
    GaussRational(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {
        re.canonicalize();
        im.canonicalize();
    }
    GaussRational(long v) : re(v), im(0) {}

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_real() const { return sgn(im) == 0; }
    /// |z|^2, exact.
    mpq_class norm2() const { return re * re + im * im; }
    GaussRational conj() const { return {re, -im}; }
    std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }

    GaussRational operator-() const { return {-re, -im}; }
    GaussRational& operator+=(const GaussRational& o);
    GaussRational& operator-=(const GaussRational& o);
    GaussRational& operator*=(const GaussRational& o);
    GaussRational& operator/=(const GaussRational& o);

    friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
    friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
    friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
    friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }
    friend bool operator==(const GaussRational& a, const GaussRational& b) {
        return a.re == b.re && a.im == b.im;
    }
};

/// Parses "p/q" or "p" into a canonical rational. Throws FormatError.
mpq_class parse_rational(const std::string& text);

/// Exact rational equal to the given double (every finite double is dyadic).
mpq_class rational_from_double(double value);

/// One entry of a matrix: an exact Gaussian rational or a complex double.
/// Binary operations on operands of different modes throw ModeMismatch.
class Scalar {
public:
    using Float = std::complex<double>;

    Scalar() : value_(GaussRational{}) {}
    Scalar(GaussRational v) : value_(std::move(v)) {}
    Scalar(Float v) : value_(v) {}

    static Scalar zero(Mode mode);
    static Scalar one(Mode mode);
    static Scalar from_int(long v, Mode mode);
    /// Converts a complex double into the requested mode (exact conversion for exact mode).
    static Scalar from_complex(Float v, Mode mode);

    Mode mode() const { return std::holds_alternative<GaussRational>(value_) ? Mode::exact : Mode::floating; }
    bool is_exact() const { return mode() == Mode::exact; }

    const GaussRational& exact() const;
    Float to_complex() const;
    double abs() const { return std::abs(to_complex()); }

    /// Exact zero test in exact mode; |z| <= tol in float mode.
    bool is_zero(double tol = 0.0) const;
    Scalar conj() const;
    Scalar to_mode(Mode mode) const;

    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

    /// Structural equality: exact equality in exact mode, bitwise in float mode.
    /// Float callers that need tolerance use is_zero(tol) on a difference.
    bool identical(const Scalar& o) const;

    std::string to_string() const;

private:
    std::variant<GaussRational, Float> value_;
};

} // namespace koszulkit
