// commands.hpp — CLI commands: trajectories, sweeps, steady states, poles, stability maps, validation
#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "bathcoh/config.hpp"

namespace bathcoh {

// Output directory override; --out beats this variable, which beats output.dir.
inline constexpr const char* kOutDirEnv = "BATHCOH_OUT_DIR";

inline constexpr const char* kCommandNames[] = {"trajectory", "sweep-detuning", "steady-state",
                                                "poles",      "stability-map",  "validate"};

struct ResultTable {
    std::string label_column;          // optional leading text column (validate)
    std::vector<std::string> columns;  // numeric columns
    std::vector<std::string> labels;   // one per row when label_column is set
    std::vector<std::vector<double>> rows;
    std::vector<std::string> notes;    // written as `# note:` header lines
};

struct CommandResult {
    ResultTable table;
    bool ok{true};     // false when validate found a check above tolerance
    std::string plot;  // gnuplot script body (empty = none)
};

struct RunOptions {
    std::string out_dir;  // --out; empty = not given
    unsigned threads{1};
};

// Runs `fn(i)` for i in [0, n) on `threads` workers; rethrows the first failure by index.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

CommandResult cmd_trajectory(const RunConfig& cfg, unsigned threads);
CommandResult cmd_sweep_detuning(const RunConfig& cfg, unsigned threads);
CommandResult cmd_steady_state(const RunConfig& cfg, unsigned threads);
CommandResult cmd_poles(const RunConfig& cfg, unsigned threads);
CommandResult cmd_stability_map(const RunConfig& cfg, unsigned threads);
CommandResult cmd_validate(const RunConfig& cfg, unsigned threads);

CommandResult run_command(const std::string& command, const RunConfig& cfg, unsigned threads);

// --out, then $BATHCOH_OUT_DIR, then output.dir.
std::string resolve_out_dir(const RunOptions& opt, const RunConfig& cfg);

// CSV with a `#` header carrying the version, command, resolved config and notes.
void write_csv(std::ostream& out, const ResultTable& t, const std::string& command, const RunConfig& cfg);

// Full pipeline: dispatch, write <dir>/<command>.csv (+ .gp). Returns the process exit code.
int run(const std::string& command, RunConfig cfg, const RunOptions& opt, std::ostream& log);

}  // namespace bathcoh
