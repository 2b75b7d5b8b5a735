#include "koszulkit/cli.hpp"

#include "koszulkit/errors.hpp"
#include "koszulkit/report.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#ifndef KOSZULKIT_DATA_DIR
#define KOSZULKIT_DATA_DIR "data"
#endif

namespace koszulkit {

namespace {

constexpr std::size_t kDefaultMaxLevel = 12;
constexpr std::size_t kDefaultRankBound = 4;
constexpr double kMappingTolerance = 1e-6;

struct Output {
    json report;
    std::optional<std::string> csv; // set when the command has a tabular form
};

const std::string& input(const RunConfig& c, std::size_t k, const char* what)
{
    if (c.inputs.size() <= k)
        throw ValidationError(to_string(c.command) + " needs " + what + " as --input number " + std::to_string(k + 1));
    return c.inputs[k];
}

double tol_rank(const RunConfig& c) { return c.tol_rank.value_or(kDefaultTauRank); }

TruncationWindow window(const RunConfig& c)
{
    TruncationWindow w;
    if (c.window) w.N = *c.window;
    if (c.guard) w.G = *c.guard;
    w.max_N = std::max(w.max_N, 2 * w.N);
    return w;
}

CommutingTuple load_tuple(const RunConfig& c, std::size_t k)
{
    return tuple_from_json(read_json_file(input(c, k, "a tuple file")), c.mode, c.tol_comm.value_or(-1.0));
}

BandedOperator load_operator(const json& j) { return operator_from_json(j); }

std::vector<unsigned> default_powers()
{
    std::vector<unsigned> p;
    for (unsigned m = 1; m <= 10; ++m) p.push_back(m);
    return p;
}

std::vector<unsigned> powers_from_json(const json& j)
{
    if (j.is_string()) return parse_powers(j.get<std::string>());
    std::vector<unsigned> p;
    for (const auto& x : j) p.push_back(x.get<unsigned>());
    return p;
}

Output growth_output(const BandedOperator& t, const std::vector<unsigned>& powers, std::size_t bound,
                     const TruncationWindow& win)
{
    const long index = fredholm_index_banded(t, win).index;
    const auto rows = growth_table(t, powers, bound, win);
    return {growth_report(rows, bound, index), growth_csv(rows)};
}

std::string data_dir(const RunConfig& c)
{
    if (!c.data_dir.empty()) return c.data_dir;
    if (const char* env = std::getenv("KOSZULKIT_DATA")) return env;
    return KOSZULKIT_DATA_DIR;
}

json load_scenario(const RunConfig& c)
{
    if (!c.inputs.empty()) return read_json_file(c.inputs.front());
    return read_json_file(data_dir(c) + "/demos/" + c.demo + ".json");
}

Output demo_theorem_1_1(const RunConfig& c, const json& sc)
{
    const BandedOperator t = load_operator(sc.at("T"));
    const auto powers = c.powers ? *c.powers : sc.contains("powers") ? powers_from_json(sc.at("powers")) : default_powers();
    const std::size_t bound = c.rank_bound.value_or(sc.value("rank_bound", kDefaultRankBound));
    Output o = growth_output(t, powers, bound, window(c));
    o.report["command"] = "demo";
    o.report["demo"] = "theorem-1.1";
    o.report["description"] = sc.value("description", "");
    return o;
}

json case_certificate(const BandedOperator& t, const BandedOperator& k, std::size_t levels, const TruncationWindow& win)
{
    return obstruction_report(obstruction_certificate(t, k, levels, win));
}

Output demo_theorem_2_1(const RunConfig& c, const json& sc)
{
    const BandedOperator t = load_operator(sc.at("T"));
    const std::size_t levels = c.max_level.value_or(sc.value("max_level", kDefaultMaxLevel));
    json cases = json::array();
    for (const auto& cs : sc.at("cases")) {
        const BandedOperator k = load_operator(cs.at("K"));
        json entry = {{"label", cs.value("label", "")},
                      {"K", operator_to_json(k)},
                      {"K_compact", k.is_compact()},
                      {"certificate", case_certificate(t, k, levels, window(c))}};
        cases.push_back(std::move(entry));
    }
    json out = {{"command", "demo"},
                {"demo", "theorem-2.1"},
                {"description", sc.value("description", "")},
                {"T", operator_to_json(t)},
                {"max_level", levels},
                {"cases", std::move(cases)}};
    return {out, std::nullopt};
}

// (T + K1, T + K2) invertible would make (T + K1, K2 - K1) invertible; the
// case reports the index of T + K1 and the certificate for K = K2 - K1.
Output demo_corollary_2_1(const RunConfig& c, const json& sc)
{
    const BandedOperator t = load_operator(sc.at("T"));
    const std::size_t levels = c.max_level.value_or(sc.value("max_level", kDefaultMaxLevel));
    const TruncationWindow win = window(c);
    json cases = json::array();
    for (const auto& cs : sc.at("cases")) {
        const BandedOperator k1 = load_operator(cs.at("K1"));
        const BandedOperator k2 = load_operator(cs.at("K2"));
        const BandedOperator t1 = t + k1;
        const BandedOperator k = k2 - k1;
        const IndexCertificate ic = fredholm_index_banded(t1, win);
        json entry = {{"label", cs.value("label", "")},
                      {"K1_compact", k1.is_compact()},
                      {"K2_compact", k2.is_compact()},
                      {"difference_compact", k.is_compact()},
                      {"index_T_plus_K1", ic.index},
                      {"T_plus_K1_invertible", ic.dim_ker == 0 && ic.dim_coker == 0}};
        const bool commutes = commutator(t1, k).is_zero();
        entry["commutes"] = commutes;
        if (commutes && ic.index > 0) {
            const auto oc = obstruction_certificate(t1, k, levels, win);
            entry["r"] = oc.r;
            entry["verdict"] = to_string(oc.verdict);
            double lo = oc.norms[oc.tower.n0];
            for (std::size_t n = oc.tower.n0; n <= levels; ++n) lo = std::min(lo, oc.norms[n]);
            entry["min_norm_from_n0"] = lo;
            entry["n0"] = oc.tower.n0;
            entry["conclusion"] = oc.verdict == Verdict::obstructed
                                      ? "K2 - K1 is bounded below by r on infinitely many orthogonal layers, so it "
                                        "is not compact"
                                      : "r = 0: this candidate gives no obstruction witness";
        } else if (!commutes) {
            entry["conclusion"] = "T + K1 and K2 - K1 do not commute, so the candidate is not a commuting pair";
        } else {
            entry["conclusion"] = "index(T + K1) <= 0; no kernel tower for this sign";
        }
        cases.push_back(std::move(entry));
    }
    json out = {{"command", "demo"},
                {"demo", "corollary-2.1"},
                {"description", sc.value("description", "")},
                {"T", operator_to_json(t)},
                {"index_T", fredholm_index_banded(t, win).index},
                {"max_level", levels},
                {"cases", std::move(cases)}};
    return {out, std::nullopt};
}

Output compute(const RunConfig& c)
{
    switch (c.command) {
    case Command::cohomology: {
        const CommutingTuple t = load_tuple(c, 0);
        return {cohomology_report(cohomology(t, tol_rank(c)), t.mode()), std::nullopt};
    }
    case Command::spectrum: {
        const CommutingTuple t = load_tuple(c, 0);
        json out = spectrum_report(joint_spectrum(t));
        if (c.inputs.size() > 1) {
            const PolyMap f = polymap_from_json(read_json_file(c.inputs[1])).to_mode(t.mode());
            const CommutingTuple ft = apply_poly_map(f, t);
            out["mapped_spectrum"] = spectrum_report(joint_spectrum(ft))["points"];
            out["spectral_mapping_holds"] = spectral_mapping_check(f, t, kMappingTolerance);
        }
        return {out, std::nullopt};
    }
    case Command::les: {
        const CommutingTuple t = load_tuple(c, 0);
        const Mat s = mat_from_json(read_json_file(input(c, 1, "the matrix S"))).to_mode(t.mode());
        return {les_report(augment_les(t, s, tol_rank(c))), std::nullopt};
    }
    case Command::index: {
        const BandedOperator t = load_operator(read_json_file(input(c, 0, "an operator file")));
        return {index_report(fredholm_index_banded(t, window(c)), t), std::nullopt};
    }
    case Command::tower: {
        const BandedOperator t = load_operator(read_json_file(input(c, 0, "an operator file")));
        const KernelTower tw = kernel_tower(t, c.max_level.value_or(kDefaultMaxLevel), window(c));
        if (c.inputs.size() > 1) {
            const CommutantBlocks cb = commutant_blocks(t, load_operator(read_json_file(c.inputs[1])), tw);
            return {tower_report(tw, &cb), std::nullopt};
        }
        return {tower_report(tw), std::nullopt};
    }
    case Command::obstruct: {
        const BandedOperator t = load_operator(read_json_file(input(c, 0, "the operator T")));
        const BandedOperator k = load_operator(read_json_file(input(c, 1, "the operator K")));
        return {obstruction_report(obstruction_certificate(t, k, c.max_level.value_or(kDefaultMaxLevel), window(c))),
                std::nullopt};
    }
    case Command::growth: {
        const BandedOperator t = load_operator(read_json_file(input(c, 0, "an operator file")));
        return growth_output(t, c.powers.value_or(default_powers()), c.rank_bound.value_or(kDefaultRankBound),
                             window(c));
    }
    case Command::demo: {
        const json sc = load_scenario(c);
        if (c.demo == "theorem-1.1") return demo_theorem_1_1(c, sc);
        if (c.demo == "theorem-2.1") return demo_theorem_2_1(c, sc);
        if (c.demo == "corollary-2.1") return demo_corollary_2_1(c, sc);
        throw ValidationError("unknown demo '" + c.demo + "' (expected theorem-1.1, theorem-2.1 or corollary-2.1)");
    }
    }
    throw ValidationError("unknown command");
}

} // namespace

Command command_from_string(const std::string& s)
{
    static const std::pair<const char*, Command> names[] = {
        {"cohomology", Command::cohomology}, {"spectrum", Command::spectrum}, {"les", Command::les},
        {"index", Command::index},           {"tower", Command::tower},       {"obstruct", Command::obstruct},
        {"growth", Command::growth},         {"demo", Command::demo}};
    for (const auto& [n, c] : names)
        if (s == n) return c;
    throw ValidationError("unknown command '" + s + "'");
}

std::string to_string(Command c)
{
    switch (c) {
    case Command::cohomology: return "cohomology";
    case Command::spectrum: return "spectrum";
    case Command::les: return "les";
    case Command::index: return "index";
    case Command::tower: return "tower";
    case Command::obstruct: return "obstruct";
    case Command::growth: return "growth";
    case Command::demo: return "demo";
    }
    return "unknown";
}

void RunConfig::validate() const
{
    if (tol_rank && !(*tol_rank > 0.0)) throw ValidationError("--tol-rank must be positive");
    if (tol_comm && !(*tol_comm > 0.0)) throw ValidationError("--tol-comm must be positive");
    {
        TruncationWindow w;
        if (window) w.N = *window;
        if (guard) w.G = *guard;
        w.max_N = std::max(w.max_N, w.N);
        w.validate();
    }
    if (max_level && *max_level < 4) throw ValidationError("--max-level must be at least 4");
    if (powers) {
        if (powers->empty()) throw ValidationError("--powers is empty");
        for (unsigned m : *powers)
            if (m == 0) throw ValidationError("--powers entries must be >= 1");
    }
    if (command == Command::demo && demo.empty()) throw ValidationError("demo needs a name");
}

std::vector<unsigned> parse_powers(const std::string& text)
{
    std::vector<unsigned> out;
    std::stringstream ss(text);
    std::string part;
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != s.size() || s.empty() || s.front() == '-') throw ValidationError("bad power '" + s + "' in '" + text + "'");
        return static_cast<unsigned>(v);
    };
    while (std::getline(ss, part, ',')) {
        if (auto dash = part.find('-'); dash != std::string::npos && dash > 0) {
            const unsigned lo = number(part.substr(0, dash)), hi = number(part.substr(dash + 1));
            if (lo > hi) throw ValidationError("empty power range '" + part + "'");
            for (unsigned m = lo; m <= hi; ++m) out.push_back(m);
        } else {
            out.push_back(number(part));
        }
    }
    if (out.empty()) throw ValidationError("no powers in '" + text + "'");
    return out;
}

int status_of_current_exception(std::string& message)
{
    try {
        throw;
    } catch (const NotStabilized& e) {
        message = std::string("not stabilized: ") + e.what();
        return kExitNotStabilized;
    } catch (const PreconditionError& e) {
        message = std::string("precondition failed: ") + e.what();
        return kExitPrecondition;
    } catch (const ValidationError& e) {
        message = std::string("invalid input: ") + e.what();
        return kExitValidation;
    } catch (const json::exception& e) {
        message = std::string("invalid input: ") + e.what();
        return kExitValidation;
    } catch (const std::exception& e) {
        message = std::string("error: ") + e.what();
        return kExitFailure;
    }
}

RunResult execute(const RunConfig& config)
{
    RunResult r;
    try {
        config.validate();
        Output o = compute(config);
        if (config.format == Format::csv) {
            if (!o.csv) throw ValidationError("csv output is only available for growth tables");
            r.report = *o.csv;
        } else {
            r.report = stable_dump(o.report);
        }
    } catch (...) {
        r.status = status_of_current_exception(r.error);
        r.report.clear();
    }
    return r;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    RunResult r = execute(config);
    if (r.status != kExitOk) {
        err << r.error << '\n';
        return r.status;
    }
    if (config.out.empty()) {
        out << r.report;
        return kExitOk;
    }
    std::ofstream f(config.out, std::ios::binary);
    if (!f || !(f << r.report)) {
        err << "error: cannot write '" << config.out << "'\n";
        return kExitFailure;
    }
    return kExitOk;
}

} // namespace koszulkit
