// End-to-end acceptance run: one PASS/FAIL line per criterion.

#include "koszulkit/cli.hpp"
#include "koszulkit/errors.hpp"
#include "koszulkit/generators.hpp"
#include "koszulkit/io.hpp"
#include "koszulkit/tower.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <sys/wait.h>

using namespace koszulkit;
namespace fs = std::filesystem;

namespace {

using BO = BandedOperator;
using Clock = std::chrono::steady_clock;

const std::string kData = KOSZULKIT_TEST_DATA;
const std::string kCli = KOSZULKIT_CLI_PATH;

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why)
    {
        if (pass) detail = why;
        pass = false;
    }
};

GaussRational g(long v) { return GaussRational(v); }

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// Shared corpus for the chain-identity and Euler characteristic checks.
std::vector<CommutingTuple> tuple_corpus()
{
    std::mt19937_64 rng(seed_from_env(101));
    std::vector<CommutingTuple> out;
    for (int k = 0; k < 200; ++k) {
        const std::size_t n = 1 + static_cast<std::size_t>(k % 3);
        const std::size_t d = 1 + static_cast<std::size_t>((k / 3) % 5);
        out.push_back(k % 2 ? random_polynomial_tuple(rng, n, d) : random_triangularizable_tuple(rng, n, d));
    }
    return out;
}

PolyMap random_map(std::mt19937_64& rng, std::size_t arity, std::size_t outs)
{
    std::uniform_int_distribution<long> coef(-3, 3), terms(1, 3), ex(0, 3);
    std::vector<std::vector<Monomial>> comps(outs);
    for (auto& c : comps)
        for (long k = terms(rng); k > 0; --k) {
            // Total degree at most 3.
            std::vector<unsigned> e(arity, 0);
            unsigned left = static_cast<unsigned>(ex(rng));
            std::uniform_int_distribution<std::size_t> slot(0, arity - 1);
            while (left-- > 0) ++e[slot(rng)];
            c.push_back({Scalar(g(coef(rng))), e});
        }
    return PolyMap(arity, comps);
}

int shell(const std::string& cmd)
{
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome chain_identity()
{
    Outcome o;
    const auto t0 = Clock::now();
    std::size_t pairs = 0;
    for (const auto& t : tuple_corpus()) {
        if (t.mode() != Mode::exact) o.fail("corpus tuple not exact");
        const auto k = koszul_complex(t);
        for (std::size_t p = 0; p + 1 < k.differentials.size(); ++p, ++pairs)
            if (!(k.differentials[p + 1] * k.differentials[p]).is_zero()) o.fail("D^{p+1} D^p != 0 at p = " + std::to_string(p));
    }
    const double s = seconds_since(t0);
    if (s > 30.0) o.fail("took " + fmt(s) + " s");
    if (o.pass) o.detail = std::to_string(pairs) + " differential pairs over 200 tuples in " + fmt(s) + " s";
    return o;
}

Outcome euler_characteristic()
{
    Outcome o;
    for (const auto& t : tuple_corpus()) {
        const auto r = cohomology(t);
        if (r.index != 0) o.fail("index " + std::to_string(r.index));
        if (r.dims != oracle::koszul_dims(t.matrices())) o.fail("dims disagree with the row-reduction oracle");
    }
    if (o.pass) o.detail = "200 tuples: index 0, dims match the oracle";
    return o;
}

Outcome zero_tuple()
{
    Outcome o;
    int count = 0;
    for (std::size_t d = 1; d <= 6; ++d)
        for (std::size_t n = 1; n <= 4; ++n, ++count) {
            const auto r = cohomology(CommutingTuple::validate(std::vector<Mat>(n, Mat(d, d))));
            for (std::size_t p = 0; p <= n; ++p)
                if (r.dims[p] != d * binomial(n, p))
                    o.fail("d = " + std::to_string(d) + ", n = " + std::to_string(n) + ", p = " + std::to_string(p));
        }
    if (o.pass) o.detail = std::to_string(count) + " (d, n) pairs give d C(n, p)";
    return o;
}

Outcome long_exact_sequence()
{
    Outcome o;
    std::mt19937_64 rng(seed_from_env(104));
    for (int k = 0; k < 100; ++k) {
        const std::size_t n = 1 + static_cast<std::size_t>(k % 2);
        const std::size_t d = 1 + static_cast<std::size_t>((k / 2) % 5);
        const auto t = random_polynomial_tuple(rng, n, d);
        const Mat s = random_matrix_polynomial(rng, t[0], 2, true);
        const auto r = augment_les(t, s);
        if (!r.agree) o.fail("sequence dims disagree with direct dims at trial " + std::to_string(k));
        if (r.index != 0) o.fail("augmented index " + std::to_string(r.index));
        if (r.dims_direct != cohomology(t.augmented(s)).dims) o.fail("direct dims inconsistent");
    }
    if (o.pass) o.detail = "100 augmented tuples: both routes agree, index 0";
    return o;
}

Outcome spectral_mapping()
{
    Outcome o;
    std::mt19937_64 rng(seed_from_env(105));
    constexpr double tol = 1e-6;
    for (int k = 0; k < 100; ++k) {
        const std::size_t n = 1 + static_cast<std::size_t>(k % 3);
        const std::size_t d = 1 + static_cast<std::size_t>((k / 3) % 5);
        const auto t = random_triangularizable_tuple(rng, n, d);
        const PolyMap f = random_map(rng, n, 1 + static_cast<std::size_t>(k % 2));
        if (!spectral_mapping_check(f, t, tol)) o.fail("library check failed at trial " + std::to_string(k));

        // Direct set comparison.
        std::vector<std::vector<std::complex<double>>> image, target;
        for (const auto& p : joint_spectrum(t).points) {
            std::vector<std::complex<double>> z;
            for (const auto& c : p.coords) z.push_back(c.to_complex());
            image.push_back(f.eval(z));
        }
        for (const auto& p : joint_spectrum(apply_poly_map(f, t)).points) {
            std::vector<std::complex<double>> z;
            for (const auto& c : p.coords) z.push_back(c.to_complex());
            target.push_back(z);
        }
        auto covered = [&](const auto& a, const auto& b) {
            for (const auto& x : a) {
                bool hit = false;
                for (const auto& y : b) {
                    bool close = true;
                    for (std::size_t i = 0; i < x.size(); ++i) close = close && std::abs(x[i] - y[i]) <= tol;
                    hit = hit || close;
                }
                if (!hit) return false;
            }
            return true;
        };
        if (!covered(image, target) || !covered(target, image)) o.fail("sets differ at trial " + std::to_string(k));
    }
    if (o.pass) o.detail = "100 tuples with maps of degree <= 3";
    return o;
}

Outcome shift_kernel_law()
{
    Outcome o;
    const BO sa = BO::adjoint_shift();
    for (unsigned m = 1; m <= 20; ++m) {
        const auto k = kernel_of_power(sa, m, TruncationWindow{64, 16, 1024});
        if (k.dim != m) o.fail("dim ker (S*)^" + std::to_string(m) + " = " + std::to_string(k.dim));
        if (!k.certified) o.fail("m = " + std::to_string(m) + " not certified");
    }
    if (o.pass) o.detail = "m = 1..20, all certified";
    return o;
}

Outcome toeplitz_index()
{
    Outcome o;
    for (long k = 1; k <= 3; ++k) {
        const long idx = fredholm_index_banded(BO::toeplitz({{k, g(1)}})).index;
        const long wind = oracle::winding_number({{static_cast<int>(k), {1.0, 0.0}}});
        if (idx != -k || idx != -wind)
            o.fail("k = " + std::to_string(k) + ": index " + std::to_string(idx) + ", winding " + std::to_string(wind));
    }
    if (o.pass) o.detail = "index(T(z^k)) = -k = -winding for k = 1, 2, 3";
    return o;
}

Outcome index_multiplicativity()
{
    Outcome o;
    const std::vector<std::pair<std::string, BO>> ops = {{"S*", BO::adjoint_shift()},
                                                         {"T(z^2)", BO::toeplitz({{2, g(1)}})}};
    for (const auto& [name, t] : ops) {
        const long base = fredholm_index_banded(t).index;
        for (unsigned m = 1; m <= 8; ++m) {
            const long im = fredholm_index_banded(power(t, m)).index;
            if (im != static_cast<long>(m) * base) o.fail(name + "^" + std::to_string(m) + ": " + std::to_string(im));
        }
    }
    if (o.pass) o.detail = "S* and T(z^2), m = 1..8";
    return o;
}

Outcome finite_rank_demo()
{
    Outcome o;
    std::vector<unsigned> ms;
    for (unsigned m = 1; m <= 12; ++m) ms.push_back(m);
    for (const auto& r : growth_table(BO::adjoint_shift(), ms, 4)) {
        if (r.dim_ker != r.m) o.fail("dim ker at m = " + std::to_string(r.m));
        if (r.exceeds != (r.m >= 5)) o.fail("exceeds flag at m = " + std::to_string(r.m));
    }
    RunConfig c;
    c.command = Command::demo;
    c.demo = "theorem-1.1";
    c.data_dir = kData;
    const auto res = execute(c);
    if (res.status != kExitOk) {
        o.fail("demo exited " + std::to_string(res.status) + ": " + res.error);
    } else {
        const json j = json::parse(res.report);
        if (j["rank_bound"] != 4 || j["first_exceeding_m"] != 5) o.fail("demo report disagrees");
        for (const auto& r : j["rows"])
            if (r["dim_ker"] != r["m"] || r["exceeds"] != (r["m"].get<unsigned>() >= 5)) o.fail("demo row disagrees");
    }
    if (o.pass) o.detail = "dim ker (S*)^m = m, exceeds from m = 5 (library and demo)";
    return o;
}

Outcome compact_obstruction_demo()
{
    Outcome o;
    const BO sa = BO::adjoint_shift();
    const BO k = BO::identity().scaled(g(2)) + sa;
    const auto oc = obstruction_certificate(sa, k, 12);
    for (std::size_t n = 1; n <= 12; ++n) {
        if (oc.tower.dims[n] != 1) o.fail("dim H_" + std::to_string(n) + " != 1");
        const auto& x = oc.blocks.X[n];
        if (x.rows() != 1 || x.cols() != 1 || std::abs(x(0, 0) - 2.0) > 1e-9) o.fail("X_" + std::to_string(n) + " != [2]");
        if (n >= 2 && oc.blocks.intertwining[n] > 1e-9) o.fail("intertwining residual at n = " + std::to_string(n));
        if (oc.norms[n] < 2.0 - 1e-8) o.fail("norm on H_" + std::to_string(n) + " = " + fmt(oc.norms[n]));
    }
    if (oc.tower.n0 > 3) o.fail("n0 = " + std::to_string(oc.tower.n0));
    if (std::abs(oc.r - 2.0) > 1e-8) o.fail("r = " + fmt(oc.r));
    if (oc.verdict != Verdict::obstructed) o.fail("K = 2I + S* not obstructed");

    const auto self = obstruction_certificate(sa, sa, 12);
    if (self.r > 1e-8) o.fail("K = S*: r = " + fmt(self.r));
    if (self.verdict != Verdict::inconclusive) o.fail("K = S* not inconclusive");

    RunConfig c;
    c.command = Command::demo;
    c.demo = "theorem-2.1";
    c.data_dir = kData;
    const auto res = execute(c);
    if (res.status != kExitOk) {
        o.fail("demo exited " + std::to_string(res.status) + ": " + res.error);
    } else {
        const json j = json::parse(res.report);
        const json& a = j["cases"][0]["certificate"];
        const json& b = j["cases"][1]["certificate"];
        if (a["verdict"] != "obstructed" || std::abs(a["r"].get<double>() - 2.0) > 1e-8) o.fail("demo case 1 disagrees");
        if (b["verdict"] != "inconclusive" || b["r"].get<double>() > 1e-8) o.fail("demo case 2 disagrees");
    }
    if (o.pass)
        o.detail = "K = 2I + S*: n0 = " + std::to_string(oc.tower.n0) + ", r = " + fmt(oc.r) + ", obstructed; K = S*: inconclusive";
    return o;
}

Outcome invertible_pairs()
{
    Outcome o;
    std::mt19937_64 rng(seed_from_env(111));
    for (int k = 0; k < 100; ++k) {
        const std::size_t d = 2 + static_cast<std::size_t>(k % 4);
        auto [t, s] = random_invertible_pair(rng, d);
        if (!cohomology(CommutingTuple::validate({t, s})).invertible) o.fail("generated pair not invertible");
        for (unsigned n = 1; n <= 4; ++n)
            if (!lemma23_check(t, s, n)) o.fail("trial " + std::to_string(k) + ", n = " + std::to_string(n));
    }
    if (o.pass) o.detail = "100 pairs, n = 1..4";
    return o;
}

Outcome similarity_chain()
{
    Outcome o;
    const BO sa = BO::adjoint_shift();
    const KernelTower tw = kernel_tower(sa, 12);
    std::mt19937_64 rng(seed_from_env(112));
    std::uniform_int_distribution<long> coef(-4, 4), deg(0, 3);
    double worst = 0.0;
    for (int k = 0; k < 25; ++k) {
        std::vector<Scalar> c;
        for (long i = deg(rng); i >= 0; --i) c.push_back(Scalar(g(coef(rng))));
        const Poly q(c, Mode::exact);
        const auto cb = commutant_blocks(sa, poly(q, sa), tw);
        worst = std::max(worst, cb.charpoly_gap);
        if (cb.charpoly_gap > 1e-8) o.fail("charpoly gap " + fmt(cb.charpoly_gap) + " at trial " + std::to_string(k));
    }
    if (o.pass) o.detail = "25 polynomials q, largest coefficient gap " + fmt(worst);
    return o;
}

Outcome determinism()
{
    Outcome o;
    const std::string ex = kData + "/examples/";
    const std::vector<std::string> runs = {
        "demo theorem-1.1 --format csv", "demo theorem-2.1", "demo corollary-2.1",
        "cohomology -i " + ex + "float_pair.json", "spectrum -i " + ex + "float_pair.json",
        "spectrum -i " + ex + "diagonal_pair.json -i " + ex + "square_map.json",
        "obstruct -i " + ex + "weighted_adjoint.json -i " + ex + "weighted_adjoint.json --max-level 6"};
    const fs::path tmp = fs::temp_directory_path();
    int k = 0;
    for (const auto& r : runs) {
        std::string outs[2];
        for (int rep = 0; rep < 2; ++rep) {
            const std::string path = (tmp / ("koszulkit_acceptance_" + std::to_string(k) + "_" + std::to_string(rep))).string();
            if (shell(kCli + " " + r + " --data-dir " + kData + " --out " + path + " > /dev/null 2>&1") != 0 &&
                shell(kCli + " " + r + " --out " + path + " > /dev/null 2>&1") != 0)
                o.fail("'" + r + "' failed");
            outs[rep] = slurp(path);
        }
        if (outs[0].empty() || outs[0] != outs[1]) o.fail("'" + r + "' differs between runs");
        ++k;
    }
    if (o.pass) o.detail = std::to_string(runs.size()) + " commands, byte-identical across two runs";
    return o;
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"chain identity D^{p+1} D^p = 0", chain_identity},
        {"Euler characteristic and oracle dims", euler_characteristic},
        {"zero tuple closed form", zero_tuple},
        {"long exact sequence", long_exact_sequence},
        {"spectral mapping", spectral_mapping},
        {"shift kernel law", shift_kernel_law},
        {"Toeplitz index", toeplitz_index},
        {"index multiplicativity", index_multiplicativity},
        {"finite-rank obstruction demo", finite_rank_demo},
        {"compact obstruction demo", compact_obstruction_demo},
        {"S invertible on ker T^n for invertible pairs", invertible_pairs},
        {"similarity chain of X_n", similarity_chain},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto t0 = Clock::now();
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.fail(std::string("threw: ") + e.what());
        }
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << ". " << criteria[i].first << " (" << o.detail
                  << "; " << fmt(seconds_since(t0)) << " s)" << std::endl;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
              << std::endl;
    return failed == 0 ? 0 : 1;
}
