#include "koszulkit/io.hpp"

#include "koszulkit/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace koszulkit {

namespace {

// Float parts this small are written as 0 so reports do not carry
// round-off noise.
constexpr double kPrintFloor = 1e-14;

const json& field(const json& j, const char* key, const char* what)
{
    if (!j.is_object() || !j.contains(key))
        throw FormatError(std::string(what) + " is missing field '" + key + "'");
    return j.at(key);
}

bool part_is_exact(const json& p)
{
    if (p.is_string()) return true;
    if (p.is_number()) return false;
    throw FormatError("scalar part must be a \"p/q\" string or a number, got " + p.dump());
}

mpq_class exact_part(const json& p)
{
    if (p.is_string()) return parse_rational(p.get<std::string>());
    if (p.is_number_integer()) return mpq_class(mpz_class(p.dump()));
    if (p.is_number()) {
        const double v = p.get<double>();
        if (!std::isfinite(v)) throw FormatError("non-finite number in input");
        return rational_from_double(v);
    }
    throw FormatError("scalar part must be a \"p/q\" string or a number, got " + p.dump());
}

double float_part(const json& p)
{
    if (p.is_string()) return parse_rational(p.get<std::string>()).get_d();
    return p.get<double>();
}

// A scalar is [re, im]; a bare string or number is read as a real value.
std::pair<json, json> parts(const json& j)
{
    if (j.is_array()) {
        if (j.size() != 2) throw FormatError("scalar must be [re, im], got " + j.dump());
        return {j[0], j[1]};
    }
    if (j.is_string() || j.is_number()) return {j, json(0)};
    throw FormatError("scalar must be [re, im], got " + j.dump());
}

json float_json(double v)
{
    if (std::abs(v) < kPrintFloor) return json(0.0);
    return json(v);
}

std::vector<GaussRational> exact_list(const json& j, const char* what)
{
    if (!j.is_array()) throw FormatError(std::string(what) + " must be a list");
    std::vector<GaussRational> out;
    for (const auto& e : j) out.push_back(exact_from_json(e));
    return out;
}

json exact_list_json(const std::vector<GaussRational>& v)
{
    json out = json::array();
    for (const auto& x : v) out.push_back(exact_to_json(x));
    return out;
}

bool is_one(const Poly& p) { return p.degree() == 0 && p.coeff(0).exact() == GaussRational(1); }

// Period written relative to the end of the prefix <-> cycle indexed by t mod L.
std::vector<GaussRational> to_absolute(const std::vector<GaussRational>& rel, std::size_t start)
{
    const std::size_t l = rel.size();
    std::vector<GaussRational> cyc(l);
    for (std::size_t s = 0; s < l; ++s) cyc[(start + s) % l] = rel[s];
    return cyc;
}

std::vector<GaussRational> to_relative(const std::vector<GaussRational>& cyc, std::size_t start)
{
    const std::size_t l = cyc.size();
    std::vector<GaussRational> rel(l);
    for (std::size_t s = 0; s < l; ++s) rel[s] = cyc[(start + s) % l];
    return rel;
}

DiagonalRule rule_from_json(const json& j)
{
    if (!j.is_object()) throw FormatError("diagonal rule must be an object");
    DiagonalRule r;
    if (j.contains("prefix")) r.prefix = exact_list(j.at("prefix"), "prefix");
    const std::size_t start = r.prefix.size();
    if (j.contains("period")) {
        auto p = exact_list(j.at("period"), "period");
        if (p.empty()) throw FormatError("period must have length >= 1");
        r.tail.push_back(TailTerm{to_absolute(p, start)});
    }
    if (j.contains("terms")) {
        if (!j.at("terms").is_array()) throw FormatError("terms must be a list");
        for (const auto& t : j.at("terms")) {
            auto p = exact_list(field(t, "period", "tail term"), "period");
            if (p.empty()) throw FormatError("period must have length >= 1");
            TailTerm term{to_absolute(p, start)};
            if (t.contains("num")) term.num = poly_from_json(t.at("num"));
            if (t.contains("den")) term.den = poly_from_json(t.at("den"));
            if (term.den.is_zero()) throw FormatError("tail denominator is the zero polynomial");
            r.tail.push_back(std::move(term));
        }
    }
    if (!j.contains("period") && !j.contains("terms"))
        throw FormatError("diagonal rule needs a 'period' or 'terms' for its tail");
    return r;
}

json rule_to_json(const DiagonalRule& r)
{
    json out;
    out["prefix"] = exact_list_json(r.prefix);
    const std::size_t start = r.prefix.size();
    json terms = json::array();
    for (const auto& t : r.tail) {
        if (is_one(t.num) && is_one(t.den) && !out.contains("period")) {
            out["period"] = exact_list_json(to_relative(t.cycle, start));
            continue;
        }
        json jt;
        jt["period"] = exact_list_json(to_relative(t.cycle, start));
        jt["num"] = poly_to_json(t.num);
        jt["den"] = poly_to_json(t.den);
        terms.push_back(std::move(jt));
    }
    if (!terms.empty()) out["terms"] = std::move(terms);
    else if (!out.contains("period")) out["period"] = exact_list_json({GaussRational(0)});
    return out;
}

BandedOperator catalog_from_json(const json& j)
{
    const std::string kind = j.at("catalog").get<std::string>();
    if (kind == "zero") return BandedOperator::zero();
    if (kind == "identity") return BandedOperator::identity();
    if (kind == "shift") return BandedOperator::shift();
    if (kind == "adjoint_shift") return BandedOperator::adjoint_shift();
    if (kind == "weighted_shift") return BandedOperator::weighted_shift(rule_from_json(field(j, "weights", "weighted_shift")));
    if (kind == "diagonal") return BandedOperator::diagonal(rule_from_json(field(j, "rule", "diagonal")));
    if (kind == "toeplitz") {
        const json& sym = field(j, "symbol", "toeplitz");
        if (!sym.is_array()) throw FormatError("toeplitz symbol must be a list of {power, coeff}");
        std::map<long, GaussRational> c;
        for (const auto& t : sym) {
            const long k = field(t, "power", "symbol term").get<long>();
            c[k] += exact_from_json(field(t, "coeff", "symbol term"));
        }
        return BandedOperator::toeplitz(c);
    }
    throw FormatError("unknown catalog operator '" + kind + "'");
}

} // namespace

Scalar scalar_from_json(const json& j)
{
    auto [re, im] = parts(j);
    if (part_is_exact(re) && part_is_exact(im)) return Scalar(GaussRational(exact_part(re), exact_part(im)));
    return Scalar(Scalar::Float(float_part(re), float_part(im)));
}

json scalar_to_json(const Scalar& s)
{
    if (s.is_exact()) return exact_to_json(s.exact());
    const auto z = s.to_complex();
    return json::array({float_json(z.real()), float_json(z.imag())});
}

GaussRational exact_from_json(const json& j)
{
    auto [re, im] = parts(j);
    return GaussRational(exact_part(re), exact_part(im));
}

json exact_to_json(const GaussRational& v) { return json::array({v.re.get_str(), v.im.get_str()}); }

Mat mat_from_json(const json& j)
{
    const long r = field(j, "rows", "matrix").get<long>();
    const long c = field(j, "cols", "matrix").get<long>();
    const json& e = field(j, "entries", "matrix");
    if (r < 0 || c < 0) throw ShapeError("matrix dimensions must be non-negative");
    if (!e.is_array() || e.size() != static_cast<std::size_t>(r * c))
        throw ShapeError("matrix declares " + std::to_string(r) + "x" + std::to_string(c) + " but lists " +
                         std::to_string(e.is_array() ? e.size() : 0) + " entries");
    std::vector<Scalar> vals;
    bool exact = true;
    for (const auto& x : e) {
        vals.push_back(scalar_from_json(x));
        exact = exact && vals.back().is_exact();
    }
    const Mode mode = exact ? Mode::exact : Mode::floating;
    for (auto& v : vals) v = v.to_mode(mode);
    if (vals.empty()) return Mat(static_cast<std::size_t>(r), static_cast<std::size_t>(c), mode);
    return Mat(static_cast<std::size_t>(r), static_cast<std::size_t>(c), std::move(vals));
}

json mat_to_json(const Mat& m)
{
    json out;
    out["rows"] = m.rows();
    out["cols"] = m.cols();
    json e = json::array();
    for (const auto& s : m.entries()) e.push_back(scalar_to_json(s));
    out["entries"] = std::move(e);
    return out;
}

CommutingTuple tuple_from_json(const json& j, std::optional<Mode> mode, double tol_comm)
{
    const json& ms = field(j, "matrices", "tuple");
    if (!ms.is_array() || ms.empty()) throw ShapeError("tuple needs at least one matrix");
    Mode m = Mode::exact;
    if (j.contains("mode")) {
        try {
            m = mode_from_string(j.at("mode").get<std::string>());
        } catch (const json::exception&) {
            throw FormatError("tuple mode must be \"exact\" or \"float\"");
        }
    }
    if (mode) m = *mode;
    std::vector<Mat> mats;
    for (const auto& x : ms) mats.push_back(mat_from_json(x).to_mode(m));
    return CommutingTuple::validate(std::move(mats), tol_comm);
}

json tuple_to_json(const CommutingTuple& t)
{
    json out;
    out["mode"] = to_string(t.mode());
    json ms = json::array();
    for (const auto& m : t.matrices()) ms.push_back(mat_to_json(m));
    out["matrices"] = std::move(ms);
    return out;
}

PolyMap polymap_from_json(const json& j)
{
    if (!j.is_array()) throw FormatError("polynomial map must be a list of polynomials");
    std::vector<std::vector<Monomial>> comps;
    std::optional<std::size_t> arity;
    bool exact = true;
    for (const auto& poly : j) {
        if (!poly.is_array()) throw FormatError("each polynomial must be a list of terms");
        std::vector<Monomial> terms;
        for (const auto& t : poly) {
            Monomial m;
            m.coeff = scalar_from_json(field(t, "coeff", "polynomial term"));
            for (const auto& k : field(t, "monomial", "polynomial term")) {
                if (!k.is_number_integer() || k.get<long>() < 0)
                    throw FormatError("monomial exponents must be non-negative integers");
                m.exponents.push_back(k.get<unsigned>());
            }
            if (arity && *arity != m.exponents.size()) throw ShapeError("monomials of different arity in one map");
            arity = m.exponents.size();
            exact = exact && m.coeff.is_exact();
            terms.push_back(std::move(m));
        }
        comps.push_back(std::move(terms));
    }
    const Mode mode = exact ? Mode::exact : Mode::floating;
    for (auto& c : comps)
        for (auto& m : c) m.coeff = m.coeff.to_mode(mode);
    return PolyMap(arity.value_or(comps.size()), std::move(comps));
}

json polymap_to_json(const PolyMap& f)
{
    json out = json::array();
    for (const auto& comp : f.components()) {
        json p = json::array();
        for (const auto& m : comp) p.push_back({{"coeff", scalar_to_json(m.coeff)}, {"monomial", m.exponents}});
        out.push_back(std::move(p));
    }
    return out;
}

Poly poly_from_json(const json& j)
{
    if (!j.is_array()) throw FormatError("polynomial must be a coefficient list");
    std::vector<Scalar> c;
    for (const auto& x : j) c.push_back(Scalar(exact_from_json(x)));
    return Poly(std::move(c), Mode::exact);
}

json poly_to_json(const Poly& p)
{
    json out = json::array();
    for (const auto& c : p.coeffs()) out.push_back(scalar_to_json(c.to_mode(Mode::exact)));
    return out;
}

BandedOperator operator_from_json(const json& j)
{
    if (!j.is_object()) throw FormatError("operator must be a JSON object");
    if (j.contains("catalog")) {
        BandedOperator op = catalog_from_json(j);
        if (j.contains("fredholm")) op = op.with_fredholm(j.at("fredholm").get<bool>());
        return op;
    }
    const long w = field(j, "bandwidth", "operator").get<long>();
    if (w < 0) throw FormatError("bandwidth must be non-negative");
    std::map<long, DiagonalRule> diags;
    const json& ds = field(j, "diagonals", "operator");
    if (!ds.is_array()) throw FormatError("diagonals must be a list");
    for (const auto& d : ds) {
        const long k = field(d, "offset", "diagonal").get<long>();
        if (std::labs(k) > w)
            throw FormatError("diagonal offset " + std::to_string(k) + " lies outside bandwidth " + std::to_string(w));
        if (diags.count(k)) throw FormatError("diagonal offset " + std::to_string(k) + " listed twice");
        diags.emplace(k, rule_from_json(d));
    }
    Mat patch;
    if (j.contains("patch") && !j.at("patch").is_null()) {
        patch = mat_from_json(j.at("patch")).to_mode(Mode::exact);
        if (!patch.square()) throw ShapeError("patch must be square");
    }
    std::optional<bool> fred;
    if (j.contains("fredholm") && !j.at("fredholm").is_null()) fred = j.at("fredholm").get<bool>();
    return BandedOperator(std::move(diags), std::move(patch), fred);
}

json operator_to_json(const BandedOperator& op)
{
    json out;
    out["bandwidth"] = op.bandwidth();
    json ds = json::array();
    for (const auto& [k, r] : op.diagonals()) {
        json d = rule_to_json(r);
        d["offset"] = k;
        ds.push_back(std::move(d));
    }
    out["diagonals"] = std::move(ds);
    if (op.patch_size() > 0) out["patch"] = mat_to_json(op.patch());
    if (op.fredholm()) out["fredholm"] = *op.fredholm();
    return out;
}

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError("'" + path + "' is not valid JSON: " + e.what());
    }
}

namespace {

void dump_value(const json& j, std::string& out, int depth)
{
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(2 * depth), ' ');
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        // nlohmann's default object type is an ordered std::map, so keys come sorted.
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ",\n";
            first = false;
            out += pad + json(it.key()).dump() + ": ";
            dump_value(it.value(), out, depth + 1);
        }
        out += "\n" + close + "}";
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        // Short arrays of scalars stay on one line.
        bool flat = j.size() <= 8;
        for (const auto& x : j) flat = flat && x.is_primitive();
        if (flat) {
            out += "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ", ";
                dump_value(j[i], out, depth + 1);
            }
            out += "]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) out += ",\n";
            out += pad;
            dump_value(j[i], out, depth + 1);
        }
        out += "\n" + close + "]";
        return;
    }
    case json::value_t::number_float: {
        const double v = j.get<double>();
        if (!std::isfinite(v)) {
            out += "null";
            return;
        }
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
        out += buf;
        return;
    }
    default:
        out += j.dump();
    }
}

} // namespace

std::string stable_dump(const json& j)
{
    std::string out;
    dump_value(j, out, 0);
    out += "\n";
    return out;
}

} // namespace koszulkit
