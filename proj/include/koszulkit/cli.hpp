#pragma once

#include "koszulkit/scalar.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace koszulkit {

enum class Command { cohomology, spectrum, les, index, tower, obstruct, growth, demo };
enum class Format { json, csv };

Command command_from_string(const std::string& s);
std::string to_string(Command c);

struct RunConfig {
    Command command = Command::cohomology;
    /// Demo name for Command::demo.
    std::string demo;
    std::vector<std::string> inputs;
    std::optional<Mode> mode;
    std::optional<double> tol_rank;
    std::optional<double> tol_comm;
    std::optional<std::size_t> window;
    std::optional<std::size_t> guard;
    std::optional<std::size_t> max_level;
    std::optional<std::vector<unsigned>> powers;
    std::optional<std::size_t> rank_bound;
    Format format = Format::json;
    /// Empty writes to the output stream passed to run().
    std::string out;
    /// Directory of demo scenarios; empty uses KOSZULKIT_DATA, then the install default.
    std::string data_dir;

    /// Throws ValidationError on non-positive tolerances or a window with N <= G.
    void validate() const;
};

/// "1-10", "1,2,5" or a mix such as "1-3,8".
std::vector<unsigned> parse_powers(const std::string& text);

/// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNotStabilized = 3;
inline constexpr int kExitPrecondition = 4;

struct RunResult {
    int status = kExitOk;
    std::string report; // empty on failure
    std::string error;
};

/// Computes the report text without touching the output destination.
RunResult execute(const RunConfig& config);

/// execute() plus output: the report goes to config.out (or `out`), the error
/// message to `err`. Returns the exit status.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Maps the current exception to an exit status and message; call from a catch block.
int status_of_current_exception(std::string& message);

} // namespace koszulkit
