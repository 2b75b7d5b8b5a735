#include "koszulkit/polynomial.hpp"

#include "koszulkit/errors.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace koszulkit {

Poly::Poly(std::vector<Scalar> coeffs, Mode mode) : mode_(mode), c_(std::move(coeffs))
{
    for (const auto& c : c_)
        if (c.mode() != mode_) throw ModeMismatch("polynomial coefficients of mixed modes");
    trim();
}

Poly Poly::constant(Scalar c)
{
    Mode m = c.mode();
    return Poly({std::move(c)}, m);
}

Poly Poly::t(Mode mode) { return Poly({Scalar::zero(mode), Scalar::one(mode)}, mode); }

void Poly::trim()
{
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Scalar Poly::coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Scalar::zero(mode_); }

Scalar Poly::leading() const { return c_.empty() ? Scalar::zero(mode_) : c_.back(); }

Scalar Poly::eval(const Scalar& x) const
{
    Scalar acc = Scalar::zero(mode_);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::complex<double> Poly::eval(std::complex<double> x) const
{
    std::complex<double> acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + it->to_complex();
    return acc;
}

Poly Poly::derivative() const
{
    std::vector<Scalar> d;
    for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(Scalar::from_int(static_cast<long>(k), mode_) * c_[k]);
    return Poly(std::move(d), mode_);
}

Poly Poly::shifted(long s) const
{
    // Horner in the shifted variable: p(t + s) = (...(c_n (t+s) + c_{n-1})(t+s) ...).
    Poly lin({Scalar::from_int(s, mode_), Scalar::one(mode_)}, mode_);
    Poly acc(mode_);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * lin + constant(*it);
    return acc;
}

Poly Poly::monic() const
{
    if (c_.empty()) return *this;
    Scalar lead = c_.back();
    std::vector<Scalar> out;
    out.reserve(c_.size());
    for (const auto& c : c_) out.push_back(c / lead);
    return Poly(std::move(out), mode_);
}

Poly operator+(const Poly& a, const Poly& b)
{
    if (a.mode_ != b.mode_) throw ModeMismatch("adding polynomials of mixed modes");
    std::vector<Scalar> out(std::max(a.c_.size(), b.c_.size()), Scalar::zero(a.mode_));
    for (std::size_t k = 0; k < a.c_.size(); ++k) out[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) out[k] += b.c_[k];
    return Poly(std::move(out), a.mode_);
}

Poly operator-(const Poly& a, const Poly& b)
{
    if (a.mode_ != b.mode_) throw ModeMismatch("subtracting polynomials of mixed modes");
    std::vector<Scalar> out(std::max(a.c_.size(), b.c_.size()), Scalar::zero(a.mode_));
    for (std::size_t k = 0; k < a.c_.size(); ++k) out[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) out[k] -= b.c_[k];
    return Poly(std::move(out), a.mode_);
}

Poly operator*(const Poly& a, const Poly& b)
{
    if (a.mode_ != b.mode_) throw ModeMismatch("multiplying polynomials of mixed modes");
    if (a.is_zero() || b.is_zero()) return Poly(a.mode_);
    std::vector<Scalar> out(a.c_.size() + b.c_.size() - 1, Scalar::zero(a.mode_));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(out), a.mode_);
}

bool operator==(const Poly& a, const Poly& b)
{
    if (a.mode_ != b.mode_ || a.c_.size() != b.c_.size()) return false;
    for (std::size_t k = 0; k < a.c_.size(); ++k)
        if (!a.c_[k].identical(b.c_[k])) return false;
    return true;
}

void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r)
{
    if (a.mode_ != Mode::exact || b.mode_ != Mode::exact)
        throw ModeMismatch("polynomial division is only defined in exact mode");
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    std::vector<Scalar> rem = a.c_;
    const std::size_t db = b.c_.size() - 1;
    std::vector<Scalar> quo(rem.size() >= b.c_.size() ? rem.size() - db : 0, Scalar::zero(Mode::exact));
    const Scalar lead = b.c_.back();
    for (std::size_t k = rem.size(); k-- > db;) {
        if (rem[k].is_zero()) continue;
        Scalar f = rem[k] / lead;
        quo[k - db] = f;
        for (std::size_t j = 0; j <= db; ++j) rem[k - db + j] -= f * b.c_[j];
    }
    q = Poly(std::move(quo), Mode::exact);
    r = Poly(std::move(rem), Mode::exact);
}

Poly gcd(Poly a, Poly b)
{
    while (!b.is_zero()) {
        Poly q, r;
        divmod(a, b, q, r);
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

Poly squarefree_part(const Poly& p)
{
    if (p.degree() <= 0) return p.monic();
    Poly g = gcd(p, p.derivative());
    Poly q, r;
    divmod(p, g, q, r);
    return q.monic();
}

std::vector<std::complex<double>> numeric_roots(const Poly& p)
{
    const int n = p.degree();
    if (n <= 0) return {};
    std::vector<std::complex<double>> c;
    for (const auto& s : p.coeffs()) c.push_back(s.to_complex());
    const std::complex<double> lead = c.back();
    if (n == 1) return {-c[0] / lead};
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -c[static_cast<std::size_t>(i)] / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
    std::vector<std::complex<double>> roots;
    for (int i = 0; i < n; ++i) roots.push_back(es.eigenvalues()(i));
    // A few Newton steps; only accepted when they reduce |p|.
    Poly dp = p.derivative();
    for (auto& z : roots) {
        for (int it = 0; it < 3; ++it) {
            std::complex<double> fz = p.eval(z);
            std::complex<double> dz = dp.eval(z);
            if (std::abs(dz) == 0.0) break;
            std::complex<double> next = z - fz / dz;
            if (std::abs(p.eval(next)) < std::abs(fz)) z = next;
            else break;
        }
    }
    return roots;
}

} // namespace koszulkit
