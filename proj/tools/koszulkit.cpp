#include "koszulkit/cli.hpp"

#include "CLI11.hpp"

#include <iostream>

using namespace koszulkit;

int main(int argc, char** argv)
{
    CLI::App app{"koszulkit: Koszul cohomology, joint spectra and kernel towers"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string mode, format = "json", powers;
    std::size_t window = 0, guard = 0, max_level = 0, rank_bound = 0;
    double tol_rank = 0.0, tol_comm = 0.0;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--input,-i", cfg.inputs, "input file (repeatable; order matters)");
        sub->add_option("--mode", mode, "arithmetic mode override")->check(CLI::IsMember({"exact", "float"}));
        sub->add_option("--tol-rank", tol_rank, "relative singular value cutoff for float ranks");
        sub->add_option("--tol-comm", tol_comm, "absolute commutator tolerance for float tuples");
        sub->add_option("--window", window, "starting section size N");
        sub->add_option("--guard", guard, "guard band width G");
        sub->add_option("--max-level", max_level, "deepest kernel tower level");
        sub->add_option("--powers", powers, "powers m, e.g. 1-10 or 1,2,5");
        sub->add_option("--rank-bound", rank_bound, "rank bound for the growth table");
        sub->add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--out,-o", cfg.out, "output path (default stdout)");
    };

    const std::pair<const char*, const char*> commands[] = {
        {"cohomology", "Koszul cohomology dims and index of a commuting tuple"},
        {"spectrum", "joint spectrum of a tuple; a second input maps it through a polynomial map"},
        {"les", "long exact sequence for (T, S): tuple file, then matrix file"},
        {"index", "Fredholm index of a banded operator"},
        {"tower", "kernel tower of T; a second input adds the commutant blocks of S"},
        {"obstruct", "obstruction certificate for (T, K)"},
        {"growth", "dim ker T^m and dim coker T^m against a rank bound"},
    };
    std::vector<CLI::App*> subs;
    for (const auto& [name, help] : commands) {
        auto* s = app.add_subcommand(name, help);
        common(s);
        subs.push_back(s);
    }
    auto* demo = app.add_subcommand("demo", "run a shipped demo scenario");
    demo->add_option("name", cfg.demo, "theorem-1.1 | theorem-2.1 | corollary-2.1")->required();
    demo->add_option("--data-dir", cfg.data_dir, "directory holding demos/");
    common(demo);
    subs.push_back(demo);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    for (auto* s : subs)
        if (s->parsed()) cfg.command = command_from_string(s->get_name());
    auto given = [&](const char* opt) {
        for (auto* s : subs)
            if (s->parsed() && s->count(opt) > 0) return true;
        return false;
    };
    try {
        if (given("--mode")) cfg.mode = mode_from_string(mode);
        if (given("--tol-rank")) cfg.tol_rank = tol_rank;
        if (given("--tol-comm")) cfg.tol_comm = tol_comm;
        if (given("--window")) cfg.window = window;
        if (given("--guard")) cfg.guard = guard;
        if (given("--max-level")) cfg.max_level = max_level;
        if (given("--rank-bound")) cfg.rank_bound = rank_bound;
        if (given("--powers")) cfg.powers = parse_powers(powers);
        cfg.format = format == "csv" ? Format::csv : Format::json;
    } catch (...) {
        std::string msg;
        const int status = status_of_current_exception(msg);
        std::cerr << msg << '\n';
        return status;
    }
    return run(cfg, std::cout, std::cerr);
}
