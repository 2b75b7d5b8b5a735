#pragma once

#include "koszulkit/scalar.hpp"

#include <complex>
#include <vector>

namespace koszulkit {

/// Univariate polynomial, coefficients lowest degree first. The zero
/// polynomial has no coefficients. Every coefficient shares one mode.
class Poly {
public:
    explicit Poly(Mode mode = Mode::exact) : mode_(mode) {}
    Poly(std::vector<Scalar> coeffs, Mode mode);

    static Poly constant(Scalar c);
    /// The monomial t.
    static Poly t(Mode mode);

    Mode mode() const { return mode_; }
    const std::vector<Scalar>& coeffs() const { return c_; }
    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    Scalar coeff(std::size_t k) const;
    Scalar leading() const;

    Scalar eval(const Scalar& x) const;
    std::complex<double> eval(std::complex<double> x) const;
    Poly derivative() const;
    /// p(t + s).
    Poly shifted(long s) const;
    Poly monic() const;

    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const Poly& b);
    friend bool operator==(const Poly& a, const Poly& b);

    /// Euclidean division; exact mode only.
    friend void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r);

private:
    void trim();

    Mode mode_;
    std::vector<Scalar> c_;
};

/// Monic gcd over the Gaussian rationals.
Poly gcd(Poly a, Poly b);
/// Product of the distinct irreducible factors (monic). Exact mode only.
Poly squarefree_part(const Poly& p);
/// Numerical roots via companion-matrix eigenvalues, refined by Newton steps.
std::vector<std::complex<double>> numeric_roots(const Poly& p);

} // namespace koszulkit
