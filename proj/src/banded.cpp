#include "koszulkit/banded.hpp"

#include "koszulkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace koszulkit {

namespace {

Poly constant_poly(const GaussRational& c) { return Poly::constant(Scalar(c)); }

Poly conj_poly(const Poly& p)
{
    std::vector<Scalar> c;
    for (const auto& x : p.coeffs()) c.emplace_back(x.exact().conj());
    return Poly(std::move(c), Mode::exact);
}

std::vector<GaussRational> minimal_period(const std::vector<GaussRational>& cycle)
{
    const std::size_t n = cycle.size();
    for (std::size_t p = 1; p < n; ++p) {
        if (n % p != 0) continue;
        bool ok = true;
        for (std::size_t t = p; ok && t < n; ++t) ok = cycle[t] == cycle[t % p];
        if (ok) return {cycle.begin(), cycle.begin() + static_cast<long>(p)};
    }
    return cycle;
}

bool all_zero(const std::vector<GaussRational>& v)
{
    return std::all_of(v.begin(), v.end(), [](const GaussRational& x) { return x.is_zero(); });
}

std::size_t tail_period(const std::vector<TailTerm>& tail)
{
    std::size_t l = 1;
    for (const auto& term : tail) l = std::lcm(l, term.cycle.size());
    return l;
}

Poly exact_quotient(const Poly& a, const Poly& b)
{
    Poly q, r;
    divmod(a, b, q, r);
    return q;
}

// n/d in lowest terms with d monic.
void reduce(Poly& n, Poly& d)
{
    if (n.is_zero()) {
        d = constant_poly(1);
        return;
    }
    const Poly g = gcd(n, d);
    if (g.degree() > 0) {
        n = exact_quotient(n, g);
        d = exact_quotient(d, g);
    }
    const GaussRational lead = d.leading().exact();
    if (!(lead == GaussRational(1))) {
        const Poly inv = constant_poly(GaussRational(1) / lead);
        n = n * inv;
        d = d * inv;
    }
}

// Sum of the tail on the residue class r (mod the common period) as a single
// reduced fraction N/D in t.
std::pair<Poly, Poly> residue_fraction(const std::vector<TailTerm>& tail, std::size_t r)
{
    Poly num(Mode::exact);
    Poly den = constant_poly(1);
    for (const auto& term : tail) {
        const GaussRational& c = term.cycle[r % term.cycle.size()];
        if (c.is_zero() || term.num.is_zero()) continue;
        const Poly g = gcd(den, term.den);
        const Poly dg = exact_quotient(term.den, g);
        num = num * dg + constant_poly(c) * term.num * exact_quotient(den, g);
        den = den * dg;
        reduce(num, den);
    }
    return {num, den};
}

// One term per distinct (monic numerator, denominator) pair across residue
// classes; the cycle carries the leading coefficients. A tail summing to the
// zero function comes out empty.
std::vector<TailTerm> canonical_tail(const std::vector<TailTerm>& tail)
{
    std::vector<TailTerm> live;
    for (const auto& term : tail)
        if (!term.cycle.empty() && !term.num.is_zero() && !all_zero(term.cycle)) live.push_back(term);
    const std::size_t l = tail_period(live);
    std::vector<TailTerm> out;
    for (std::size_t r = 0; r < l; ++r) {
        auto [n, d] = residue_fraction(live, r);
        if (n.is_zero()) continue;
        const GaussRational lead = n.leading().exact();
        n = n * constant_poly(GaussRational(1) / lead);
        auto same = std::find_if(out.begin(), out.end(), [&](const TailTerm& m) { return m.num == n && m.den == d; });
        if (same == out.end()) {
            out.push_back(TailTerm{std::vector<GaussRational>(l), n, d});
            same = std::prev(out.end());
        }
        same->cycle[r] = lead;
    }
    for (auto& term : out) term.cycle = minimal_period(term.cycle);
    return out;
}

// Integer roots of den at or beyond `start` would make the tail undefined.
// Candidates are the integers next to real-ish numerical roots, each checked exactly.
void check_denominator(const Poly& den, std::size_t start)
{
    if (den.is_zero()) throw FormatError("diagonal tail has a zero denominator");
    if (den.degree() <= 0) return;
    for (const auto& z : numeric_roots(den)) {
        if (std::abs(z.imag()) > 0.5 || z.real() < static_cast<double>(start) - 1.5) continue;
        const long c = std::lround(z.real());
        for (long t = std::max(c - 1, static_cast<long>(start)); t <= c + 1; ++t)
            if (den.eval(Scalar::from_int(t, Mode::exact)).is_zero())
                throw FormatError("diagonal tail denominator vanishes at position " + std::to_string(t));
    }
}

TailTerm shifted(const TailTerm& term, long s)
{
    TailTerm out;
    const long l = static_cast<long>(term.cycle.size());
    out.cycle.resize(term.cycle.size());
    for (long t = 0; t < l; ++t) out.cycle[static_cast<std::size_t>(t)] = term.cycle[static_cast<std::size_t>(((t + s) % l + l) % l)];
    out.num = term.num.shifted(s);
    out.den = term.den.shifted(s);
    return out;
}

TailTerm product(const TailTerm& a, const TailTerm& b)
{
    TailTerm out;
    const std::size_t l = std::lcm(a.cycle.size(), b.cycle.size());
    out.cycle.resize(l);
    for (std::size_t t = 0; t < l; ++t) out.cycle[t] = a.cycle[t % a.cycle.size()] * b.cycle[t % b.cycle.size()];
    out.num = a.num * b.num;
    out.den = a.den * b.den;
    return out;
}

bool trivial(const DiagonalRule& r) { return r.tail.empty() && all_zero(r.prefix); }

// (row, col) of position t on offset k.
std::pair<std::size_t, std::size_t> position(long k, std::size_t t)
{
    return {t + static_cast<std::size_t>(std::max(0L, -k)), t + static_cast<std::size_t>(std::max(0L, k))};
}

} // namespace

std::optional<GaussRational> TailTerm::at(std::size_t t) const
{
    const Scalar x = Scalar::from_int(static_cast<long>(t), Mode::exact);
    const GaussRational d = den.eval(x).exact();
    if (d.is_zero()) return std::nullopt;
    return cycle[t % cycle.size()] * num.eval(x).exact() / d;
}

GaussRational DiagonalRule::at(std::size_t t) const
{
    if (t < prefix.size()) return prefix[t];
    GaussRational v;
    for (const auto& term : tail) v += *term.at(t);
    return v;
}

DiagonalRule DiagonalRule::constant(GaussRational c) { return periodic({}, {std::move(c)}); }

DiagonalRule DiagonalRule::periodic(std::vector<GaussRational> prefix, std::vector<GaussRational> period)
{
    if (period.empty()) throw FormatError("diagonal period must have at least one entry");
    DiagonalRule r;
    const std::size_t l = period.size();
    TailTerm term;
    term.cycle.resize(l);
    // period[0] sits at position prefix.size().
    for (std::size_t u = 0; u < l; ++u) term.cycle[(prefix.size() + u) % l] = period[u];
    r.prefix = std::move(prefix);
    r.tail.push_back(std::move(term));
    return r;
}

DiagonalRule DiagonalRule::rational(std::vector<GaussRational> prefix, const Poly& num, const Poly& den)
{
    DiagonalRule r;
    r.prefix = std::move(prefix);
    r.tail.push_back({{GaussRational(1)}, num, den});
    return r;
}

bool DiagonalRule::decays() const
{
    const std::size_t l = tail_period(tail);
    for (std::size_t r = 0; r < l; ++r) {
        auto [n, d] = residue_fraction(tail, r);
        if (!n.is_zero() && n.degree() >= d.degree()) return false;
    }
    return true;
}

bool DiagonalRule::bounded_below_eventually() const
{
    if (tail.empty()) return false;
    const std::size_t l = tail_period(tail);
    for (std::size_t r = 0; r < l; ++r) {
        auto [n, d] = residue_fraction(tail, r);
        if (n.is_zero() || n.degree() != d.degree()) return false;
    }
    return true;
}

BandedOperator::BandedOperator(std::map<long, DiagonalRule> diagonals, Mat patch, std::optional<bool> fredholm)
    : diag_(std::move(diagonals)), patch_(std::move(patch)), fredholm_(fredholm)
{
    if (!patch_.square()) throw ShapeError("operator patch must be square");
    if (patch_.rows() > 0 && patch_.mode() != Mode::exact) patch_ = patch_.to_mode(Mode::exact);
    normalize();
}

void BandedOperator::normalize()
{
    for (auto& [k, rule] : diag_) {
        for (const auto& term : rule.tail) {
            if (term.cycle.empty()) throw FormatError("diagonal " + std::to_string(k) + " has an empty period");
            check_denominator(term.den, rule.prefix.size());
        }
        rule.tail = canonical_tail(rule.tail);
        const std::size_t l = tail_period(rule.tail);
        for (std::size_t r = 0; r < l; ++r) {
            auto [n, d] = residue_fraction(rule.tail, r);
            if (!n.is_zero() && n.degree() > d.degree())
                throw FormatError("diagonal " + std::to_string(k) + " is unbounded");
        }
    }
    auto band = [&] {
        long w = 0;
        for (const auto& [k, rule] : diag_)
            if (!trivial(rule)) w = std::max(w, std::abs(k));
        return w;
    };
    w_ = band();

    // Fold in-band patch entries into the prefixes.
    std::size_t extent = 0;
    for (std::size_t i = 0; i < patch_.rows(); ++i)
        for (std::size_t j = 0; j < patch_.cols(); ++j) {
            const GaussRational& v = patch_(i, j).exact();
            if (v.is_zero()) continue;
            const long k = static_cast<long>(j) - static_cast<long>(i);
            if (std::abs(k) <= w_) {
                DiagonalRule& rule = diag_[k];
                const std::size_t t = std::min(i, j);
                while (rule.prefix.size() <= t) rule.prefix.push_back(rule.at(rule.prefix.size()));
                rule.prefix[t] += v;
                patch_.set(i, j, Scalar(GaussRational()));
            } else {
                extent = std::max(extent, std::max(i, j) + 1);
            }
        }
    patch_ = extent == 0 ? Mat() : patch_.block(0, 0, extent, extent);

    // Trim prefixes where they agree with the tail.
    for (auto& [k, rule] : diag_) {
        while (!rule.prefix.empty()) {
            const std::size_t t = rule.prefix.size() - 1;
            GaussRational v;
            bool defined = true;
            for (const auto& term : rule.tail) {
                auto x = term.at(t);
                if (!x) {
                    defined = false;
                    break;
                }
                v += *x;
            }
            if (!defined || !(v == rule.prefix.back())) break;
            rule.prefix.pop_back();
        }
    }
    for (auto it = diag_.begin(); it != diag_.end();)
        it = trivial(it->second) ? diag_.erase(it) : std::next(it);
    w_ = band();
}

BandedOperator BandedOperator::zero() { return BandedOperator({}, Mat(), false); }

BandedOperator BandedOperator::identity() { return BandedOperator({{0, DiagonalRule::constant(1)}}, Mat(), true); }

BandedOperator BandedOperator::shift() { return BandedOperator({{-1, DiagonalRule::constant(1)}}, Mat(), true); }

BandedOperator BandedOperator::adjoint_shift()
{
    return BandedOperator({{1, DiagonalRule::constant(1)}}, Mat(), true);
}

BandedOperator BandedOperator::weighted_shift(DiagonalRule weights)
{
    const bool fred = weights.bounded_below_eventually();
    BandedOperator op({{-1, std::move(weights)}});
    op.fredholm_ = fred;
    return op;
}

BandedOperator BandedOperator::toeplitz(const std::map<long, GaussRational>& symbol)
{
    std::map<long, DiagonalRule> rules;
    for (const auto& [k, c] : symbol)
        if (!c.is_zero()) rules[-k] = DiagonalRule::constant(c);
    BandedOperator op(std::move(rules));
    // Fredholm iff the symbol has no zero on the unit circle.
    if (symbol.empty()) {
        op.fredholm_ = false;
        return op;
    }
    const long lo = symbol.begin()->first;
    std::vector<Scalar> coeffs(static_cast<std::size_t>(symbol.rbegin()->first - lo + 1), Scalar::zero(Mode::exact));
    for (const auto& [k, c] : symbol) coeffs[static_cast<std::size_t>(k - lo)] = Scalar(c);
    const Poly p(std::move(coeffs), Mode::exact);
    bool fred = !p.is_zero();
    if (fred)
        for (auto z : numeric_roots(p)) fred = fred && std::abs(std::abs(z) - 1.0) > 1e-9;
    op.fredholm_ = fred;
    return op;
}

BandedOperator BandedOperator::diagonal(DiagonalRule rule)
{
    const bool fred = rule.bounded_below_eventually();
    BandedOperator op({{0, std::move(rule)}});
    op.fredholm_ = fred;
    return op;
}

BandedOperator BandedOperator::with_fredholm(std::optional<bool> flag) const
{
    BandedOperator out = *this;
    out.fredholm_ = flag;
    return out;
}

std::size_t BandedOperator::max_prefix() const
{
    std::size_t l = 0;
    for (const auto& [k, rule] : diag_) l = std::max(l, rule.prefix.size());
    return l;
}

GaussRational BandedOperator::entry(std::size_t i, std::size_t j) const
{
    GaussRational v;
    const long k = static_cast<long>(j) - static_cast<long>(i);
    if (std::abs(k) <= w_) {
        auto it = diag_.find(k);
        if (it != diag_.end()) v = it->second.at(std::min(i, j));
    }
    if (i < patch_.rows() && j < patch_.cols()) v += patch_(i, j).exact();
    return v;
}

Mat BandedOperator::section_exact(std::size_t rows, std::size_t cols) const
{
    Mat m(rows, cols);
    for (const auto& [k, rule] : diag_)
        for (std::size_t t = 0;; ++t) {
            auto [i, j] = position(k, t);
            if (i >= rows || j >= cols) break;
            m.set(i, j, Scalar(rule.at(t)));
        }
    for (std::size_t i = 0; i < std::min(rows, patch_.rows()); ++i)
        for (std::size_t j = 0; j < std::min(cols, patch_.cols()); ++j)
            if (!patch_(i, j).is_zero()) m.set(i, j, Scalar(m(i, j).exact() + patch_(i, j).exact()));
    return m;
}

Eigen::MatrixXcd BandedOperator::section(std::size_t rows, std::size_t cols) const
{
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (const auto& [k, rule] : diag_)
        for (std::size_t t = 0;; ++t) {
            auto [i, j] = position(k, t);
            if (i >= rows || j >= cols) break;
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rule.at(t).to_complex();
        }
    for (std::size_t i = 0; i < std::min(rows, patch_.rows()); ++i)
        for (std::size_t j = 0; j < std::min(cols, patch_.cols()); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += patch_(i, j).to_complex();
    return m;
}

std::size_t BandedOperator::image_length(std::size_t len) const
{
    if (len == 0) return 0;
    return std::max(len + static_cast<std::size_t>(w_), patch_.rows());
}

Eigen::MatrixXcd BandedOperator::apply(const Eigen::MatrixXcd& v) const
{
    const auto len = static_cast<std::size_t>(v.rows());
    return section(image_length(len), len) * v;
}

bool BandedOperator::is_zero() const { return diag_.empty() && patch_.rows() == 0; }

bool BandedOperator::is_compact() const
{
    return std::all_of(diag_.begin(), diag_.end(), [](const auto& kv) { return kv.second.decays(); });
}

BandedOperator BandedOperator::adjoint() const
{
    std::map<long, DiagonalRule> rules;
    for (const auto& [k, rule] : diag_) {
        DiagonalRule r;
        for (const auto& v : rule.prefix) r.prefix.push_back(v.conj());
        for (const auto& term : rule.tail) {
            TailTerm c;
            for (const auto& v : term.cycle) c.cycle.push_back(v.conj());
            c.num = conj_poly(term.num);
            c.den = conj_poly(term.den);
            r.tail.push_back(std::move(c));
        }
        rules[-k] = std::move(r);
    }
    return BandedOperator(std::move(rules), patch_.rows() ? patch_.adjoint() : Mat(), fredholm_);
}

BandedOperator BandedOperator::scaled(const GaussRational& c) const
{
    std::map<long, DiagonalRule> rules = diag_;
    for (auto& [k, rule] : rules) {
        for (auto& v : rule.prefix) v *= c;
        for (auto& term : rule.tail)
            for (auto& v : term.cycle) v *= c;
    }
    Mat p = patch_.rows() ? Scalar(c) * patch_ : Mat();
    std::optional<bool> fred = c.is_zero() ? std::optional<bool>(false) : fredholm_;
    return BandedOperator(std::move(rules), std::move(p), fred);
}

BandedOperator operator+(const BandedOperator& a, const BandedOperator& b)
{
    std::map<long, DiagonalRule> rules;
    for (const auto* op : {&a, &b})
        for (const auto& [k, rule] : op->diag_) rules.try_emplace(k);
    for (auto& [k, rule] : rules) {
        const auto ia = a.diag_.find(k);
        const auto ib = b.diag_.find(k);
        const DiagonalRule* ra = ia == a.diag_.end() ? nullptr : &ia->second;
        const DiagonalRule* rb = ib == b.diag_.end() ? nullptr : &ib->second;
        const std::size_t len = std::max(ra ? ra->prefix.size() : 0, rb ? rb->prefix.size() : 0);
        for (std::size_t t = 0; t < len; ++t)
            rule.prefix.push_back((ra ? ra->at(t) : GaussRational()) + (rb ? rb->at(t) : GaussRational()));
        for (const auto* r : {ra, rb})
            if (r) rule.tail.insert(rule.tail.end(), r->tail.begin(), r->tail.end());
    }
    const std::size_t p = std::max(a.patch_.rows(), b.patch_.rows());
    Mat patch(p, p);
    for (const auto* op : {&a, &b})
        for (std::size_t i = 0; i < op->patch_.rows(); ++i)
            for (std::size_t j = 0; j < op->patch_.cols(); ++j)
                if (!op->patch_(i, j).is_zero()) patch.set(i, j, Scalar(patch(i, j).exact() + op->patch_(i, j).exact()));

    std::optional<bool> fred;
    if (a.fredholm_ == true && b.is_compact()) fred = true;
    if (b.fredholm_ == true && a.is_compact()) fred = true;
    if (a.fredholm_ == false && b.fredholm_ == false && a.is_compact() && b.is_compact()) fred = false;
    return BandedOperator(std::move(rules), std::move(patch), fred);
}

BandedOperator operator-(const BandedOperator& a, const BandedOperator& b) { return a + b.scaled(GaussRational(-1)); }

GaussRational BandedOperator::product_entry(const BandedOperator& a, const BandedOperator& b, std::size_t i,
                                            std::size_t j)
{
    GaussRational v;
    std::size_t lo = i > static_cast<std::size_t>(a.w_) ? i - static_cast<std::size_t>(a.w_) : 0;
    std::size_t hi = i + static_cast<std::size_t>(a.w_);
    if (i < a.patch_.rows()) {
        lo = 0;
        hi = std::max(hi, a.patch_.rows() - 1);
    }
    for (std::size_t l = lo; l <= hi; ++l) {
        const GaussRational x = a.entry(i, l);
        if (x.is_zero()) continue;
        const GaussRational y = b.entry(l, j);
        if (!y.is_zero()) v += x * y;
    }
    return v;
}

BandedOperator operator*(const BandedOperator& a, const BandedOperator& b)
{
    const long wa = a.w_, wb = b.w_, wc = wa + wb;
    const std::size_t pa = a.patch_.rows(), pb = b.patch_.rows();
    const std::size_t len =
        std::max({a.max_prefix(), b.max_prefix(), pa, pb}) + static_cast<std::size_t>(wc) + 1;

    std::map<long, DiagonalRule> rules;
    for (long c = -wc; c <= wc; ++c) {
        DiagonalRule r;
        for (const auto& [ka, ra] : a.diag_) {
            auto ib = b.diag_.find(c - ka);
            if (ib == b.diag_.end()) continue;
            // Position t on offset c reads position t + sa on ka and t + sb on kb.
            const long sa = std::min(0L, ka) - std::min(0L, c);
            const long sb = std::min(ka, c) - std::min(0L, c);
            for (const auto& ta : ra.tail)
                for (const auto& tb : ib->second.tail) r.tail.push_back(product(shifted(ta, sa), shifted(tb, sb)));
        }
        for (std::size_t t = 0; t < len; ++t) {
            auto [i, j] = position(c, t);
            r.prefix.push_back(BandedOperator::product_entry(a, b, i, j));
        }
        rules[c] = std::move(r);
    }

    Mat patch;
    if (pa > 0 || pb > 0) {
        const std::size_t p = std::max(pa + static_cast<std::size_t>(wb), pb + static_cast<std::size_t>(wa));
        patch = Mat(p, p);
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j) {
                const long k = static_cast<long>(j) - static_cast<long>(i);
                if (std::abs(k) <= wc) continue;
                const GaussRational v = BandedOperator::product_entry(a, b, i, j);
                if (!v.is_zero()) patch.set(i, j, Scalar(v));
            }
    }
    std::optional<bool> fred;
    if (a.fredholm_ == true && b.fredholm_ == true) fred = true;
    return BandedOperator(std::move(rules), std::move(patch), fred);
}

bool operator==(const BandedOperator& a, const BandedOperator& b) { return (a - b).is_zero(); }

BandedOperator power(const BandedOperator& a, unsigned m)
{
    BandedOperator out = BandedOperator::identity();
    for (unsigned k = 0; k < m; ++k) out = k == 0 ? a : out * a;
    return out;
}

BandedOperator poly(const Poly& p, const BandedOperator& a)
{
    if (p.mode() != Mode::exact) throw ModeMismatch("operator polynomials need exact coefficients");
    if (p.is_zero()) return BandedOperator::zero();
    const auto& c = p.coeffs();
    BandedOperator out = BandedOperator::identity().scaled(c.back().exact());
    for (std::size_t k = c.size() - 1; k-- > 0;)
        out = out * a + BandedOperator::identity().scaled(c[k].exact());
    return out;
}

BandedOperator commutator(const BandedOperator& a, const BandedOperator& b) { return a * b - b * a; }

} // namespace koszulkit
