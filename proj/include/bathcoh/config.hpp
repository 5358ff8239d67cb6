// config.hpp — line-oriented `section.key = value` run configuration
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bathcoh/exact.hpp"
#include "bathcoh/model_bath.hpp"

namespace bathcoh {

// Parse or validation failure; the message names the line and key.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A grid written either as `start:step:stop` (inclusive, uniform) or as a comma list.
struct GridSpec {
    std::string text;            // as written, re-emitted verbatim
    std::vector<double> values;  // strictly increasing
    bool empty() const noexcept { return values.empty(); }
};

GridSpec parse_grid(const std::string& text);

struct BathBlock {
    std::string name;  // section name, e.g. `bath` or `bath2`
    SpectralDensity spectral{SuperOhmic{}};
    Occupation occupation{Thermal{}};
    std::optional<double> phi_a;  // per-bath coupling; defaults to the system values
    std::optional<double> phi_b;
};

struct Numerics {
    std::size_t oracle_N{0};     // discretized-bath modes; 0 = sized from the time grid
    double oracle_nu_max{0.0};   // 0 = bath support edge
    int fock_n_max{6};
    double tol_oracle{1e-2};     // exact vs discretized bath, relative to max |component|
    double tol_fock{1e-6};       // truncated Fock vs BR moments
};

struct OutputBlock {
    std::string dir{"."};
    bool gnuplot{true};
};

inline constexpr const char* kMethodNames[] = {"exact",      "br",         "spbr",           "secular",
                                               "collective", "individual", "oracle-discrete", "oracle-fock"};

struct RunConfig {
    std::string command;  // optional; must match the command given on the command line

    std::optional<double> omega_a, omega_b, Omega, Delta;
    double phi_a{0.7071067811865476};
    double phi_b{0.7071067811865476};

    std::vector<BathBlock> baths;

    GridSpec times;
    GridSpec detunings;
    GridSpec centers;  // Ω grid for stability-map
    std::optional<double> slice_time;

    std::vector<std::string> methods;
    Numerics numerics;
    OutputBlock output;

    double base_omega_a() const;
    double base_omega_b() const;
    SystemSpec system() const;
    // Detuning sweeps vary ω_b at fixed ω_a: ω_b = ω_a - 2Δ.
    SystemSpec system_at_detuning(double Delta) const;
    MultiBathSpec multibath(const SystemSpec& sys) const;
    bool has_method(const std::string& m) const;

    // Resolved text form; parse_config(to_text()) gives an equivalent configuration.
    std::string to_text() const;
};

// Throws ConfigError on syntax errors, unknown keys, or violated invariants.
RunConfig parse_config(const std::string& text, const std::string& source = "config");
RunConfig load_config(const std::string& path);

// Shortest decimal string that reads back to the same binary64 value.
std::string format_double(double x);

}  // namespace bathcoh
