#include "koszulkit/spectrum.hpp"

#include "koszulkit/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace koszulkit {

namespace {

// Best rational approximation with bounded denominator (continued fractions).
mpq_class nearest_rational(double x, long max_den = 10'000'000)
{
    if (std::abs(x) < 1e-12) return 0;
    const double sign = x < 0 ? -1.0 : 1.0;
    double v = std::abs(x);
    mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    for (int it = 0; it < 64; ++it) {
        const double a = std::floor(v);
        const mpz_class ai = static_cast<long>(a);
        mpz_class h2 = ai * h1 + h0;
        mpz_class k2 = ai * k1 + k0;
        if (k2 > max_den) break;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        const double frac = v - a;
        if (frac < 1e-12) break;
        v = 1.0 / frac;
    }
    mpq_class q(h1 * static_cast<long>(sign), k1);
    q.canonicalize();
    return q;
}

bool exact_less(const GaussRational& a, const GaussRational& b)
{
    if (a.re != b.re) return a.re < b.re;
    return a.im < b.im;
}

bool float_less(std::complex<double> a, std::complex<double> b)
{
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

// Every eigenvalue of an exact matrix, sorted, or DeflationFailure when one is
// not a Gaussian rational.
std::vector<GaussRational> exact_eigenvalues(const Mat& m)
{
    const Poly sf = squarefree_part(characteristic_polynomial(m));
    std::vector<GaussRational> out;
    for (const auto& z : numeric_roots(sf)) {
        GaussRational cand(nearest_rational(z.real()), nearest_rational(z.imag()));
        if (!sf.eval(Scalar(cand)).is_zero())
            throw DeflationFailure("exact mode needs Gaussian-rational eigenvalues; root near (" +
                                   std::to_string(z.real()) + ", " + std::to_string(z.imag()) +
                                   ") is not one");
        out.push_back(cand);
    }
    std::sort(out.begin(), out.end(), exact_less);
    return out;
}

// Smallest eigenvalue cluster of a float matrix; the cluster mean is returned so
// a defective eigenvalue split by rounding is recovered accurately.
std::complex<double> smallest_float_eigenvalue(const Eigen::MatrixXcd& m)
{
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
    std::vector<std::complex<double>> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    double scale = 1.0;
    for (auto z : ev) scale = std::max(scale, std::abs(z));
    const double radius = 1e-3 * scale;

    std::vector<int> cluster(ev.size(), -1);
    int nclusters = 0;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        if (cluster[i] >= 0) continue;
        cluster[i] = nclusters;
        std::vector<std::size_t> frontier{i};
        while (!frontier.empty()) {
            const std::size_t a = frontier.back();
            frontier.pop_back();
            for (std::size_t b = 0; b < ev.size(); ++b)
                if (cluster[b] < 0 && std::abs(ev[a] - ev[b]) <= radius) {
                    cluster[b] = nclusters;
                    frontier.push_back(b);
                }
        }
        ++nclusters;
    }
    std::vector<std::complex<double>> means(static_cast<std::size_t>(nclusters), 0.0);
    std::vector<double> counts(static_cast<std::size_t>(nclusters), 0.0);
    for (std::size_t i = 0; i < ev.size(); ++i) {
        means[static_cast<std::size_t>(cluster[i])] += ev[i];
        counts[static_cast<std::size_t>(cluster[i])] += 1.0;
    }
    for (std::size_t c = 0; c < means.size(); ++c) means[c] /= counts[c];
    // Clean tiny imaginary/real parts so conjugate-free spectra sort stably.
    for (auto& z : means) {
        if (std::abs(z.imag()) <= 1e-12 * scale) z = {z.real(), 0.0};
        if (std::abs(z.real()) <= 1e-12 * scale) z = {0.0, z.imag()};
    }
    return *std::min_element(means.begin(), means.end(), float_less);
}

std::vector<Scalar> deflate_exact(std::vector<Mat>& cur)
{
    const std::size_t s = cur.front().rows();
    Mat u = Mat::identity(s);
    std::vector<Scalar> coords;
    for (const Mat& ti : cur) {
        const Mat m = restrict_to_invariant(ti, u);
        const GaussRational lam = exact_eigenvalues(m).front();
        const Mat k = kernel_basis(m - Scalar(lam) * Mat::identity(m.rows()));
        if (k.cols() == 0) throw DeflationFailure("empty eigenspace in exact deflation");
        u = u * k;
        coords.emplace_back(lam);
    }
    if (s == 1) {
        cur.clear();
        return coords;
    }
    // Complete the common eigenvector v to a basis with unit vectors, dropping
    // the coordinate where v is largest.
    const std::vector<Scalar> v = u.col(0);
    std::size_t pivot = 0;
    mpq_class best = -1;
    for (std::size_t j = 0; j < s; ++j) {
        const mpq_class mag = v[j].exact().norm2();
        if (mag > best) {
            best = mag;
            pivot = j;
        }
    }
    Mat p(s, s);
    for (std::size_t i = 0; i < s; ++i) p.set(i, 0, v[i]);
    std::size_t c = 1;
    for (std::size_t j = 0; j < s; ++j) {
        if (j == pivot) continue;
        p.set(j, c++, Scalar::one(Mode::exact));
    }
    for (Mat& ti : cur) {
        auto conj = solve(p, ti * p);
        if (!conj) throw DeflationFailure("singular completion basis");
        ti = conj->block(1, 1, s - 1, s - 1);
    }
    return coords;
}

std::vector<Scalar> deflate_float(std::vector<Mat>& cur)
{
    const std::size_t s = cur.front().rows();
    double scale = 1.0;
    for (const Mat& ti : cur) scale = std::max(scale, ti.max_abs());
    const double thr = kDeflationThreshold * scale;

    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s));
    std::vector<Scalar> coords;
    for (const Mat& tm : cur) {
        const Eigen::MatrixXcd ti = tm.to_eigen();
        const Eigen::MatrixXcd m = u.adjoint() * ti * u;
        if ((ti * u - u * m).norm() > thr)
            throw DeflationFailure("eigenspace is not invariant to within the conditioning threshold");
        const std::complex<double> lam = smallest_float_eigenvalue(m);
        const Eigen::MatrixXcd shifted = m - lam * Eigen::MatrixXcd::Identity(m.rows(), m.cols());
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(shifted, Eigen::ComputeFullV);
        Eigen::Index null = 0;
        const auto& sv = svd.singularValues();
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) <= thr) ++null;
        if (null == 0)
            throw DeflationFailure("eigenvector extraction below the conditioning threshold (smallest singular value " +
                                   std::to_string(sv(sv.size() - 1)) + ")");
        u = u * svd.matrixV().rightCols(null);
        coords.emplace_back(lam);
    }
    if (s == 1) {
        cur.clear();
        return coords;
    }
    const Eigen::VectorXcd v = u.col(0).normalized();
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(v);
    const Eigen::MatrixXcd q = qr.householderQ();
    const auto tail = static_cast<Eigen::Index>(s - 1);
    for (Mat& tm : cur) {
        const Eigen::MatrixXcd conj = q.adjoint() * tm.to_eigen() * q;
        if (conj.col(0).tail(tail).norm() > thr) throw DeflationFailure("deflation left a nonzero sub-column");
        tm = Mat::from_eigen(conj.bottomRightCorner(tail, tail));
    }
    return coords;
}

bool point_less(const std::vector<Scalar>& a, const std::vector<Scalar>& b)
{
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_exact()) {
            if (exact_less(a[i].exact(), b[i].exact())) return true;
            if (exact_less(b[i].exact(), a[i].exact())) return false;
        } else {
            const auto x = a[i].to_complex();
            const auto y = b[i].to_complex();
            if (float_less(x, y)) return true;
            if (float_less(y, x)) return false;
        }
    }
    return false;
}

bool same_point(const std::vector<Scalar>& a, const std::vector<Scalar>& b, double tol)
{
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_exact() && b[i].is_exact()) {
            if (!(a[i].exact() == b[i].exact())) return false;
        } else if (std::abs(a[i].to_complex() - b[i].to_complex()) > tol) {
            return false;
        }
    }
    return true;
}

// Multivariate polynomial keyed by exponent vector.
using Terms = std::map<std::vector<unsigned>, Scalar>;

Terms to_terms(const std::vector<Monomial>& comp, Mode mode)
{
    Terms t;
    for (const auto& m : comp) {
        auto [it, fresh] = t.emplace(m.exponents, m.coeff.to_mode(mode));
        if (!fresh) it->second += m.coeff.to_mode(mode);
    }
    return t;
}

Terms multiply(const Terms& a, const Terms& b)
{
    Terms out;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) {
            std::vector<unsigned> e(ea.size());
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            auto [it, fresh] = out.emplace(e, ca * cb);
            if (!fresh) it->second += ca * cb;
        }
    return out;
}

std::vector<Monomial> from_terms(const Terms& t)
{
    std::vector<Monomial> out;
    for (const auto& [e, c] : t)
        if (!c.is_zero()) out.push_back({c, e});
    return out;
}

Mode map_mode(const PolyMap& f)
{
    for (const auto& comp : f.components())
        for (const auto& m : comp) return m.coeff.mode();
    return Mode::exact;
}

} // namespace

std::size_t JointSpectrum::total_multiplicity() const
{
    std::size_t total = 0;
    for (const auto& p : points) total += p.multiplicity;
    return total;
}

JointSpectrum joint_spectrum(const CommutingTuple& t)
{
    JointSpectrum js;
    js.mode = t.mode();
    std::vector<Mat> cur = t.matrices();
    std::vector<std::vector<Scalar>> found;
    while (!cur.empty())
        found.push_back(js.mode == Mode::exact ? deflate_exact(cur) : deflate_float(cur));

    // Merge before sorting: float noise can put copies of one point on either
    // side of a neighbour that shares its first coordinate.
    double scale = 1.0;
    for (const auto& m : t.matrices()) scale = std::max(scale, m.max_abs());
    for (auto& z : found) {
        auto hit = std::find_if(js.points.begin(), js.points.end(),
                                [&](const SpectrumPoint& p) { return same_point(p.coords, z, 1e-6 * scale); });
        if (hit != js.points.end())
            ++hit->multiplicity;
        else
            js.points.push_back({std::move(z), 1});
    }
    std::sort(js.points.begin(), js.points.end(),
              [](const SpectrumPoint& a, const SpectrumPoint& b) { return point_less(a.coords, b.coords); });
    return js;
}

bool in_spectrum(const CommutingTuple& t, const std::vector<Scalar>& z, double tau_rank)
{
    return !cohomology(t.shifted_by(z), tau_rank).invertible;
}

PolyMap::PolyMap(std::size_t arity, std::vector<std::vector<Monomial>> components)
    : arity_(arity), components_(std::move(components))
{
    std::optional<Mode> mode;
    for (const auto& comp : components_)
        for (const auto& m : comp) {
            if (m.exponents.size() != arity_)
                throw ShapeError("monomial has " + std::to_string(m.exponents.size()) + " exponents, map arity is " +
                                 std::to_string(arity_));
            if (mode && *mode != m.coeff.mode()) throw ModeMismatch("polynomial map mixes coefficient modes");
            mode = m.coeff.mode();
        }
}

PolyMap PolyMap::identity(std::size_t n, Mode mode)
{
    std::vector<std::vector<Monomial>> comps;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<unsigned> e(n, 0);
        e[i] = 1;
        comps.push_back({Monomial{Scalar::one(mode), e}});
    }
    return PolyMap(n, std::move(comps));
}

std::size_t PolyMap::degree() const
{
    std::size_t deg = 0;
    for (const auto& comp : components_)
        for (const auto& m : comp) {
            std::size_t total = 0;
            for (unsigned k : m.exponents) total += k;
            deg = std::max(deg, total);
        }
    return deg;
}

std::vector<Scalar> PolyMap::eval(const std::vector<Scalar>& z) const
{
    if (z.size() != arity_) throw ShapeError("point has wrong arity for the polynomial map");
    const Mode mode = z.empty() ? map_mode(*this) : z.front().mode();
    std::vector<Scalar> out;
    for (const auto& comp : components_) {
        Scalar acc = Scalar::zero(mode);
        for (const auto& m : comp) {
            Scalar term = m.coeff.to_mode(mode);
            for (std::size_t i = 0; i < arity_; ++i)
                for (unsigned k = 0; k < m.exponents[i]; ++k) term *= z[i];
            acc += term;
        }
        out.push_back(acc);
    }
    return out;
}

std::vector<std::complex<double>> PolyMap::eval(const std::vector<std::complex<double>>& z) const
{
    if (z.size() != arity_) throw ShapeError("point has wrong arity for the polynomial map");
    std::vector<std::complex<double>> out;
    for (const auto& comp : components_) {
        std::complex<double> acc = 0.0;
        for (const auto& m : comp) {
            std::complex<double> term = m.coeff.to_complex();
            for (std::size_t i = 0; i < arity_; ++i) term *= std::pow(z[i], static_cast<int>(m.exponents[i]));
            acc += term;
        }
        out.push_back(acc);
    }
    return out;
}

PolyMap PolyMap::to_mode(Mode mode) const
{
    auto comps = components_;
    for (auto& comp : comps)
        for (auto& m : comp) m.coeff = m.coeff.to_mode(mode);
    return PolyMap(arity_, std::move(comps));
}

CommutingTuple apply_poly_map(const PolyMap& f, const CommutingTuple& t)
{
    if (f.arity() != t.n())
        throw ShapeError("polynomial map takes " + std::to_string(f.arity()) + " variables, tuple has " +
                         std::to_string(t.n()) + " operators");
    const Mode mode = t.mode();
    const std::size_t d = t.d();
    std::vector<std::vector<Mat>> powers(t.n(), std::vector<Mat>{Mat::identity(d, mode)});
    auto pw = [&](std::size_t i, unsigned k) -> const Mat& {
        while (powers[i].size() <= k) powers[i].push_back(powers[i].back() * t[i]);
        return powers[i][k];
    };
    std::vector<Mat> out;
    for (const auto& comp : f.components()) {
        Mat acc(d, d, mode);
        for (const auto& m : comp) {
            Mat term = m.coeff.to_mode(mode) * Mat::identity(d, mode);
            for (std::size_t i = 0; i < t.n(); ++i)
                if (m.exponents[i] > 0) term = term * pw(i, m.exponents[i]);
            acc = acc + term;
        }
        out.push_back(std::move(acc));
    }
    return CommutingTuple::validate(std::move(out));
}

PolyMap compose(const PolyMap& f, const PolyMap& g)
{
    if (f.arity() != g.outputs())
        throw ShapeError("cannot compose: inner map has " + std::to_string(g.outputs()) + " outputs, outer takes " +
                         std::to_string(f.arity()));
    const Mode mode = map_mode(f);
    const std::size_t n = g.arity();
    std::vector<Terms> inner;
    for (const auto& comp : g.components()) inner.push_back(to_terms(comp, mode));

    std::vector<std::vector<Monomial>> comps;
    for (const auto& comp : f.components()) {
        Terms acc;
        for (const auto& m : comp) {
            Terms term{{std::vector<unsigned>(n, 0), m.coeff}};
            for (std::size_t j = 0; j < f.arity(); ++j)
                for (unsigned k = 0; k < m.exponents[j]; ++k) term = multiply(term, inner[j]);
            for (const auto& [e, c] : term) {
                auto [it, fresh] = acc.emplace(e, c);
                if (!fresh) it->second += c;
            }
        }
        comps.push_back(from_terms(acc));
    }
    return PolyMap(n, std::move(comps));
}

bool spectral_mapping_check(const PolyMap& f, const CommutingTuple& t, double tol)
{
    const JointSpectrum before = joint_spectrum(t);
    const JointSpectrum after = joint_spectrum(apply_poly_map(f, t));
    std::vector<std::vector<Scalar>> image;
    for (const auto& p : before.points) image.push_back(f.eval(p.coords));

    auto covered = [tol](const std::vector<Scalar>& z, const std::vector<std::vector<Scalar>>& set) {
        return std::any_of(set.begin(), set.end(), [&](const std::vector<Scalar>& w) {
            for (std::size_t i = 0; i < z.size(); ++i)
                if (std::abs(z[i].to_complex() - w[i].to_complex()) > tol) return false;
            return true;
        });
    };
    std::vector<std::vector<Scalar>> spectrum_after;
    for (const auto& p : after.points) spectrum_after.push_back(p.coords);
    for (const auto& z : image)
        if (!covered(z, spectrum_after)) return false;
    for (const auto& z : spectrum_after)
        if (!covered(z, image)) return false;
    return true;
}

bool lemma11_check(const CommutingTuple& t, const PolyMap& f, double tol)
{
    if (!cohomology(t, tol).invertible) throw PreconditionError("lemma11_check needs an invertible tuple");
    return cohomology(apply_poly_map(f, t), tol).invertible;
}

ZeroFiberReport zero_fiber_spot_check(const PolyMap& f, std::uint64_t seed, std::size_t samples, double radius,
                                      double tol)
{
    ZeroFiberReport r;
    const Mode mode = map_mode(f);
    const auto at_origin = f.eval(std::vector<Scalar>(f.arity(), Scalar::zero(mode)));
    r.vanishes_at_origin = std::all_of(at_origin.begin(), at_origin.end(), [](const Scalar& s) { return s.is_zero(); });

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t s = 0; s < samples; ++s) {
        std::vector<std::complex<double>> z(f.arity());
        double znorm = 0.0;
        for (auto& c : z) {
            c = std::polar(radius * std::sqrt(unit(rng)), 2.0 * M_PI * unit(rng));
            znorm += std::norm(c);
        }
        double fnorm = 0.0;
        for (auto w : f.eval(z)) fnorm += std::norm(w);
        ++r.samples;
        if (std::sqrt(znorm) > tol && std::sqrt(fnorm) <= tol) {
            r.counterexample = z;
            break;
        }
    }
    return r;
}

} // namespace koszulkit
