#include "koszulkit/scalar.hpp"

#include "koszulkit/errors.hpp"

#include <cmath>
#include <sstream>

namespace koszulkit {

std::string to_string(Mode mode) { return mode == Mode::exact ? "exact" : "float"; }

Mode mode_from_string(const std::string& text)
{
    if (text == "exact") return Mode::exact;
    if (text == "float") return Mode::floating;
    throw FormatError("unknown arithmetic mode '" + text + "' (expected exact|float)");
}

GaussRational& GaussRational::operator+=(const GaussRational& o)
{
    re += o.re;
    im += o.im;
    return *this;
}

GaussRational& GaussRational::operator-=(const GaussRational& o)
{
    re -= o.re;
    im -= o.im;
    return *this;
}

GaussRational& GaussRational::operator*=(const GaussRational& o)
{
    if (sgn(im) == 0 && sgn(o.im) == 0) {
        re *= o.re;
        return *this;
    }
    mpq_class r = re * o.re - im * o.im;
    mpq_class i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

GaussRational& GaussRational::operator/=(const GaussRational& o)
{
    if (o.is_zero()) throw std::domain_error("division by exact zero");
    if (sgn(im) == 0 && sgn(o.im) == 0) {
        re /= o.re;
        return *this;
    }
    mpq_class n = o.norm2();
    mpq_class r = (re * o.re + im * o.im) / n;
    mpq_class i = (im * o.re - re * o.im) / n;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

mpq_class parse_rational(const std::string& text)
{
    std::string t;
    for (char c : text)
        if (c != ' ') t.push_back(c);
    if (t.empty()) throw FormatError("empty rational literal");
    if (!t.empty() && t.front() == '+') t.erase(t.begin());
    // Decimal literals such as "0.25" are accepted and converted exactly.
    if (auto dot = t.find('.'); dot != std::string::npos && t.find('/') == std::string::npos) {
        std::string digits = t.substr(0, dot) + t.substr(dot + 1);
        if (digits.empty() || digits == "-") throw FormatError("malformed rational literal '" + text + "'");
        mpz_class num;
        if (num.set_str(digits, 10) != 0) throw FormatError("malformed rational literal '" + text + "'");
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, t.size() - dot - 1);
        mpq_class q(num, den);
        q.canonicalize();
        return q;
    }
    mpq_class q;
    if (q.set_str(t, 10) != 0) throw FormatError("malformed rational literal '" + text + "'");
    if (sgn(q.get_den()) == 0) throw FormatError("zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
}

mpq_class rational_from_double(double value)
{
    if (!std::isfinite(value)) throw FormatError("non-finite value cannot be made exact");
    mpq_class q(value);
    q.canonicalize();
    return q;
}

Scalar Scalar::zero(Mode mode) { return from_int(0, mode); }
Scalar Scalar::one(Mode mode) { return from_int(1, mode); }

Scalar Scalar::from_int(long v, Mode mode)
{
    if (mode == Mode::exact) return Scalar(GaussRational(v));
    return Scalar(Float(static_cast<double>(v), 0.0));
}

Scalar Scalar::from_complex(Float v, Mode mode)
{
    if (mode == Mode::floating) return Scalar(v);
    return Scalar(GaussRational(rational_from_double(v.real()), rational_from_double(v.imag())));
}

const GaussRational& Scalar::exact() const
{
    if (auto p = std::get_if<GaussRational>(&value_)) return *p;
    throw ModeMismatch("exact value requested from a float scalar");
}

Scalar::Float Scalar::to_complex() const
{
    if (auto p = std::get_if<GaussRational>(&value_)) return p->to_complex();
    return std::get<Float>(value_);
}

bool Scalar::is_zero(double tol) const
{
    if (auto p = std::get_if<GaussRational>(&value_)) return p->is_zero();
    return std::abs(std::get<Float>(value_)) <= tol;
}

Scalar Scalar::conj() const
{
    if (auto p = std::get_if<GaussRational>(&value_)) return Scalar(p->conj());
    return Scalar(std::conj(std::get<Float>(value_)));
}

Scalar Scalar::to_mode(Mode m) const
{
    if (m == mode()) return *this;
    if (m == Mode::floating) return Scalar(to_complex());
    return from_complex(std::get<Float>(value_), Mode::exact);
}

Scalar Scalar::operator-() const
{
    if (auto p = std::get_if<GaussRational>(&value_)) return Scalar(-*p);
    return Scalar(-std::get<Float>(value_));
}

namespace {

void require_same(const Scalar& a, const Scalar& b)
{
    if (a.mode() != b.mode()) throw ModeMismatch("mixed exact/float arithmetic");
}

} // namespace

Scalar& Scalar::operator+=(const Scalar& o)
{
    require_same(*this, o);
    std::visit([&](auto& v) { v += std::get<std::decay_t<decltype(v)>>(o.value_); }, value_);
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o)
{
    require_same(*this, o);
    std::visit([&](auto& v) { v -= std::get<std::decay_t<decltype(v)>>(o.value_); }, value_);
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o)
{
    require_same(*this, o);
    std::visit([&](auto& v) { v *= std::get<std::decay_t<decltype(v)>>(o.value_); }, value_);
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& o)
{
    require_same(*this, o);
    std::visit([&](auto& v) { v /= std::get<std::decay_t<decltype(v)>>(o.value_); }, value_);
    return *this;
}

bool Scalar::identical(const Scalar& o) const
{
    if (mode() != o.mode()) return false;
    if (is_exact()) return exact() == o.exact();
    return std::get<Float>(value_) == std::get<Float>(o.value_);
}

std::string Scalar::to_string() const
{
    if (auto p = std::get_if<GaussRational>(&value_)) {
        if (p->is_real()) return p->re.get_str();
        return "(" + p->re.get_str() + "," + p->im.get_str() + ")";
    }
    std::ostringstream os;
    os.precision(12);
    os << std::get<Float>(value_);
    return os.str();
}

} // namespace koszulkit
