// commands.cpp — CLI commands and their CSV / gnuplot output

#include "bathcoh/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "bathcoh/diag.hpp"
#include "bathcoh/exact.hpp"
#include "bathcoh/meq.hpp"
#include "bathcoh/version.hpp"

namespace bathcoh {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string> kObservables{"F_aa", "F_bb", "ReF_ab", "ImF_ab", "lambda_m"};

void append_moments(std::vector<double>& row, const SecondMoments& m)
{
    row.insert(row.end(), {m.aa, m.bb, m.ab.real(), m.ab.imag(), min_eigen_F(m)});
}

void append_nan(std::vector<double>& row, std::size_t n) { row.insert(row.end(), n, kNaN); }

std::vector<std::string> moment_columns(const std::vector<std::string>& methods)
{
    std::vector<std::string> cols;
    for (const auto& m : methods)
        for (const auto& o : kObservables) cols.push_back(m + ":" + o);
    return cols;
}

const BathSpec& single_bath(const MultiBathSpec& multi, const std::string& method)
{
    if (multi.channels().size() != 1)
        throw DomainError(method + ": defined for a single bath only (config has " +
                          std::to_string(multi.channels().size()) + ")");
    return multi.channels().front().bath;
}

// The coupling of a single-bath configuration is the system's (φ_a, φ_b).
SystemSpec with_channel_couplings(const MultiBathSpec& multi, const SystemSpec& sys)
{
    if (multi.channels().size() != 1) return sys;
    const auto& c = multi.channels().front();
    return SystemSpec(sys.omega_a(), sys.omega_b(), c.phi_a, c.phi_b);
}

std::string where(const SystemSpec& sys)
{
    return "omega_a=" + format_double(sys.omega_a()) + ", omega_b=" + format_double(sys.omega_b());
}

std::vector<SecondMoments> trajectory_of(const std::string& method, const RunConfig& cfg, const SystemSpec& sys0,
                                         const MultiBathSpec& multi, std::span<const double> times)
{
    const SystemSpec sys = with_channel_couplings(multi, sys0);
    try {
        auto from_traj = [](const Trajectory& tr) {
            std::vector<SecondMoments> out;
            for (const auto& f : tr.f) out.push_back(from_moment_vector(f));
            return out;
        };
        const MomentVector vac = MomentVector::Zero();
        if (method == "exact")
            return multi.channels().size() == 1 ? exact_moments(sys, multi.channels()[0].bath, times)
                                                : exact_moments_multibath(multi, sys, times);
        if (method == "br") return from_traj(evolve(multibath_generator(multi, sys, GeneratorKind::BR), vac, times));
        if (method == "spbr")
            return from_traj(evolve(multibath_generator(multi, sys, GeneratorKind::SpBR), vac, times));
        if (method == "secular")
            return from_traj(evolve(secularize(multibath_generator(multi, sys, GeneratorKind::BR)), vac, times));
        if (method == "collective")
            return from_traj(evolve(collective_generator(sys, single_bath(multi, method)), vac, times));
        if (method == "individual")
            return from_traj(evolve(individual_generator(sys, single_bath(multi, method)), vac, times));
        if (method == "oracle-discrete") {
            OracleConfig oc{cfg.numerics.oracle_N, cfg.numerics.oracle_nu_max, cfg.numerics.fock_n_max};
            return discretized_bath_oracle(multi, sys, oc, times);
        }
        if (method == "oracle-fock") {
            OracleConfig oc{cfg.numerics.oracle_N, cfg.numerics.oracle_nu_max, cfg.numerics.fock_n_max};
            return fock_oracle(sys, single_bath(multi, method), oc, times);
        }
    } catch (const std::exception& e) {
        throw std::runtime_error(method + " (" + where(sys) + "): " + e.what());
    }
    throw DomainError("unknown method '" + method + "'");
}

// Steady state, or nullopt-style NaN when the method has no unique fixed point.
bool steady_of(const std::string& method, const SystemSpec& sys0, const MultiBathSpec& multi, SecondMoments& out,
               std::string& why)
{
    const SystemSpec sys = with_channel_couplings(multi, sys0);
    try {
        if (method == "exact") {
            out = multi.channels().size() == 1 ? exact_steady_state(sys, multi.channels()[0].bath)
                                               : exact_steady_state(multi, sys);
            return true;
        }
        Generator g;
        if (method == "br") g = multibath_generator(multi, sys, GeneratorKind::BR);
        else if (method == "spbr") g = multibath_generator(multi, sys, GeneratorKind::SpBR);
        else if (method == "secular") g = secularize(multibath_generator(multi, sys, GeneratorKind::BR));
        else if (method == "collective") g = collective_generator(sys, single_bath(multi, method));
        else if (method == "individual") g = individual_generator(sys, single_bath(multi, method));
        else throw DomainError("no steady state for method '" + method + "'");
        out = from_moment_vector(steady_state(g));
        return true;
    } catch (const NoSteadyState& e) {
        why = e.what();
        return false;
    } catch (const std::exception& e) {
        throw std::runtime_error(method + " (" + where(sys) + "): " + e.what());
    }
}

const std::vector<double>& require(const GridSpec& g, const char* key, const char* command)
{
    if (g.empty()) throw ConfigError(std::string(command) + ": " + key + " is required");
    return g.values;
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

// gnuplot `using` plots of selected columns (1-based) against column x.
std::string line_plot(const std::string& csv, const std::string& xlabel, const std::string& ylabel, int x,
                      const std::vector<std::pair<int, std::string>>& ys)
{
    std::ostringstream o;
    o << "set datafile separator ','\nset datafile commentschars '#'\n";
    o << "set xlabel " << quote(xlabel) << "\nset ylabel " << quote(ylabel) << "\n";
    o << "plot ";
    for (std::size_t k = 0; k < ys.size(); ++k)
        o << (k ? ", \\\n     " : "") << quote(csv) << " skip 1 using " << x << ":" << ys[k].first
          << " with lines title " << quote(ys[k].second);
    o << "\npause -1\n";
    return o.str();
}

int column_of(const ResultTable& t, const std::string& name)
{
    const auto it = std::find(t.columns.begin(), t.columns.end(), name);
    return it == t.columns.end() ? -1 : static_cast<int>(it - t.columns.begin()) + 1;
}

std::vector<std::pair<int, std::string>> method_columns(const ResultTable& t, const RunConfig& cfg,
                                                        const std::string& obs)
{
    std::vector<std::pair<int, std::string>> ys;
    for (const auto& m : cfg.methods)
        if (int c = column_of(t, m + ":" + obs); c > 0) ys.emplace_back(c, m);
    return ys;
}

}  // namespace

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn)
{
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned nt = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < nt; ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// ---- Commands ----

CommandResult cmd_trajectory(const RunConfig& cfg, unsigned threads)
{
    const auto& times = require(cfg.times, "task.times", "trajectory");
    const SystemSpec sys = cfg.system();
    const MultiBathSpec multi = cfg.multibath(sys);
    std::vector<std::vector<SecondMoments>> per(cfg.methods.size());
    parallel_for(cfg.methods.size(), threads,
                 [&](std::size_t k) { per[k] = trajectory_of(cfg.methods[k], cfg, sys, multi, times); });

    CommandResult r;
    r.table.columns = {"t"};
    for (const auto& c : moment_columns(cfg.methods)) r.table.columns.push_back(c);
    for (std::size_t i = 0; i < times.size(); ++i) {
        std::vector<double> row{times[i]};
        for (const auto& traj : per) append_moments(row, traj[i]);
        r.table.rows.push_back(std::move(row));
    }
    r.plot = line_plot("trajectory.csv", "t", "Re F_ab", 1, method_columns(r.table, cfg, "ReF_ab"));
    return r;
}

CommandResult cmd_sweep_detuning(const RunConfig& cfg, unsigned threads)
{
    const auto& deltas = require(cfg.detunings, "task.detunings", "sweep-detuning");
    const auto& times = require(cfg.times, "task.times", "sweep-detuning");
    std::size_t slice = times.size();  // all times
    if (cfg.slice_time) {
        const auto it = std::min_element(times.begin(), times.end(), [&](double a, double b) {
            return std::abs(a - *cfg.slice_time) < std::abs(b - *cfg.slice_time);
        });
        slice = static_cast<std::size_t>(it - times.begin());
    }
    const MultiBathSpec multi = cfg.multibath(cfg.system());
    const std::size_t nm = cfg.methods.size();
    std::vector<std::vector<SecondMoments>> per(deltas.size() * nm);
    parallel_for(per.size(), threads, [&](std::size_t k) {
        const SystemSpec sys = cfg.system_at_detuning(deltas[k / nm]);
        per[k] = trajectory_of(cfg.methods[k % nm], cfg, sys, multi, times);
    });

    CommandResult r;
    r.table.columns = {"Delta", "t"};
    for (const auto& c : moment_columns(cfg.methods)) r.table.columns.push_back(c);
    for (std::size_t d = 0; d < deltas.size(); ++d)
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (slice < times.size() && i != slice) continue;
            std::vector<double> row{deltas[d], times[i]};
            for (std::size_t m = 0; m < nm; ++m) append_moments(row, per[d * nm + m][i]);
            r.table.rows.push_back(std::move(row));
        }
    r.table.notes.push_back("detuning varies omega_b at fixed omega_a: omega_b = omega_a - 2*Delta");
    if (slice < times.size()) {
        r.table.notes.push_back("slice at t = " + format_double(times[slice]));
        auto ys = method_columns(r.table, cfg, "ReF_ab");
        r.plot = line_plot("sweep-detuning.csv", "Delta", "Re F_ab", 1, ys);
    } else if (!cfg.methods.empty()) {
        const int c = column_of(r.table, cfg.methods.front() + ":ReF_ab");
        const int ci = column_of(r.table, cfg.methods.front() + ":ImF_ab");
        std::ostringstream o;
        o << "set datafile separator ','\nset datafile commentschars '#'\n"
          << "set xlabel 'Delta'\nset ylabel 't'\nset view map\n"
          << "splot 'sweep-detuning.csv' skip 1 using 1:2:(sqrt($" << c << "**2 + $" << ci
          << "**2)) with points palette pointtype 5 title '|F_ab| (" << cfg.methods.front() << ")'\npause -1\n";
        r.plot = o.str();
    }
    return r;
}

CommandResult cmd_steady_state(const RunConfig& cfg, unsigned threads)
{
    const auto& deltas = require(cfg.detunings, "task.detunings", "steady-state");
    std::vector<std::string> methods;
    CommandResult r;
    for (const auto& m : cfg.methods) {
        if (m.rfind("oracle", 0) == 0) r.table.notes.push_back(m + " has no steady state and is skipped");
        else methods.push_back(m);
    }
    const MultiBathSpec multi = cfg.multibath(cfg.system());
    const std::size_t nm = methods.size();
    std::vector<SecondMoments> val(deltas.size() * nm);
    std::vector<std::string> why(val.size());
    std::vector<char> have(val.size(), 0);
    parallel_for(val.size(), threads, [&](std::size_t k) {
        const SystemSpec sys = cfg.system_at_detuning(deltas[k / nm]);
        have[k] = steady_of(methods[k % nm], sys, multi, val[k], why[k]);
    });

    r.table.columns = {"Delta"};
    for (const auto& c : moment_columns(methods)) r.table.columns.push_back(c);
    for (std::size_t d = 0; d < deltas.size(); ++d) {
        std::vector<double> row{deltas[d]};
        for (std::size_t m = 0; m < nm; ++m) {
            const std::size_t k = d * nm + m;
            if (have[k]) {
                append_moments(row, val[k]);
            } else {
                append_nan(row, kObservables.size());
                r.table.notes.push_back("Delta = " + format_double(deltas[d]) + ": " + methods[m] +
                                        " written as NaN, no unique steady state (" + why[k] + ")");
            }
        }
        r.table.rows.push_back(std::move(row));
    }
    r.table.notes.push_back("detuning varies omega_b at fixed omega_a: omega_b = omega_a - 2*Delta");
    RunConfig shown = cfg;
    shown.methods = methods;
    r.plot = line_plot("steady-state.csv", "Delta", "Re F_ab(inf)", 1, method_columns(r.table, shown, "ReF_ab"));
    return r;
}

CommandResult cmd_poles(const RunConfig& cfg, unsigned threads)
{
    std::vector<double> deltas = cfg.detunings.values;
    if (deltas.empty()) deltas = {cfg.system().delta()};
    const MultiBathSpec multi = cfg.multibath(cfg.system());
    const bool single = multi.channels().size() == 1;

    CommandResult r;
    r.table.columns = {"Delta",       "zeta1_re",    "zeta1_im",     "zeta2_re",     "zeta2_im",
                       "slow_rate",   "pole_rate_perturbative",      "br_mu0",       "spbr_mu0",
                       "br_mu0_perturbative",        "spbr_mu0_perturbative"};
    std::vector<std::vector<double>> rows(deltas.size());
    std::vector<std::string> notes(deltas.size());
    parallel_for(deltas.size(), threads, [&](std::size_t k) {
        const SystemSpec sys = with_channel_couplings(multi, cfg.system_at_detuning(deltas[k]));
        std::vector<double> row{deltas[k]};
        try {
            PoleSet ps = single ? find_poles(sys, multi.channels()[0].bath) : find_poles(multi, sys);
            auto roots = ps.roots;
            std::sort(roots.begin(), roots.end(), [](const Pole& a, const Pole& b) {
                return a.zeta.real() > b.zeta.real();
            });
            for (std::size_t i = 0; i < 2; ++i) {
                if (i < roots.size()) row.insert(row.end(), {roots[i].zeta.real(), roots[i].zeta.imag()});
                else append_nan(row, 2);
            }
            if (roots.size() != 2)
                notes[k] = "Delta = " + format_double(deltas[k]) + ": " + std::to_string(roots.size()) + " roots found";
            row.push_back(roots.empty() ? kNaN : -2.0 * ps.slowest().zeta.imag());
            if (single) {
                const BathSpec& bath = multi.channels()[0].bath;
                row.push_back(2.0 * perturbative_pole_rate(sys, bath));
                row.push_back(numeric_eigenvalues(br_generator(sys, bath).M)[0].real());
                row.push_back(numeric_eigenvalues(spbr_generator(sys, bath).M)[0].real());
                const bool zero = sys.delta() == 0.0;
                row.push_back(zero ? 0.0 : br_perturbative_rate(sys, bath));
                row.push_back(zero ? 0.0 : spbr_perturbative_rate(sys, bath));
            } else {
                row.push_back(kNaN);
                row.push_back(numeric_eigenvalues(multibath_generator(multi, sys, GeneratorKind::BR).M)[0].real());
                row.push_back(numeric_eigenvalues(multibath_generator(multi, sys, GeneratorKind::SpBR).M)[0].real());
                append_nan(row, 2);
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("poles (" + where(sys) + "): " + e.what());
        }
        rows[k] = std::move(row);
    });
    r.table.rows = std::move(rows);
    for (auto& n : notes)
        if (!n.empty()) r.table.notes.push_back(n);
    r.table.notes.push_back("rates are population rates 2*(-Im zeta); mu0 is the smallest Re eigenvalue of M");
    if (!single) r.table.notes.push_back("perturbative columns are single-bath formulas and are NaN here");
    r.plot = line_plot("poles.csv", "Delta", "rate", 1,
                       {{6, "exact slow rate"}, {7, "perturbative"}, {8, "BR mu0"}, {9, "SpBR mu0"}});
    return r;
}

CommandResult cmd_stability_map(const RunConfig& cfg, unsigned threads)
{
    const auto& deltas = require(cfg.detunings, "task.detunings", "stability-map");
    std::vector<double> centers = cfg.centers.values;
    if (centers.empty()) centers = {cfg.system().center()};
    const MultiBathSpec multi = cfg.multibath(cfg.system());
    const BathSpec& bath = single_bath(multi, "stability-map");
    const auto& ch = multi.channels().front();

    CommandResult r;
    r.table.columns = {"Omega", "Delta", "stability_margin", "br_min_re_mu", "markov_scale", "markov_flag"};
    std::vector<std::vector<double>> rows(centers.size() * deltas.size());
    parallel_for(rows.size(), threads, [&](std::size_t k) {
        const double Om = centers[k / deltas.size()], D = deltas[k % deltas.size()];
        const SystemSpec sys = SystemSpec::from_detuning(Om, D, ch.phi_a, ch.phi_b);
        try {
            const double ms = markov_scale(sys, bath);
            rows[k] = {Om, D, stability_margin(sys, bath), numeric_eigenvalues(br_generator(sys, bath).M)[0].real(), ms,
                       ms >= kMarkovThreshold ? 1.0 : 0.0};
        } catch (const std::exception& e) {
            throw std::runtime_error("stability-map (" + where(sys) + "): " + e.what());
        }
    });
    r.table.rows = std::move(rows);
    r.table.notes.push_back("stable when stability_margin > 0; markov_flag = 1 when |dK/domega|*|K| >= 0.1");
    std::ostringstream o;
    o << "set datafile separator ','\nset datafile commentschars '#'\n"
      << "set xlabel 'Omega'\nset ylabel 'Delta'\nset view map\n"
      << "splot 'stability-map.csv' skip 1 using 1:2:3 with points palette pointtype 5 title 'stability margin'\n"
      << "pause -1\n";
    r.plot = o.str();
    return r;
}

CommandResult cmd_validate(const RunConfig& cfg, unsigned threads)
{
    const SystemSpec sys0 = cfg.system();
    const MultiBathSpec multi = cfg.multibath(sys0);
    const SystemSpec sys = with_channel_couplings(multi, sys0);
    const bool single = multi.channels().size() == 1;
    std::vector<double> times = cfg.times.values;
    if (times.empty()) times = parse_grid("0:0.05:50").values;

    struct Check {
        std::string name;
        double value{kNaN};
        double tol{0.0};
        std::string note;
    };
    std::vector<Check> checks{{"exact_vs_discretized_bath", kNaN, cfg.numerics.tol_oracle, ""},
                              {"fock_vs_br_trajectory", kNaN, cfg.numerics.tol_fock, ""},
                              {"fock_vs_br_derivative", kNaN, cfg.numerics.tol_fock, ""},
                              {"spbr_sum_rule", kNaN, 1e-12, ""},
                              {"closed_form_eigenvalues", kNaN, 1e-10, ""}};

    parallel_for(checks.size(), threads, [&](std::size_t k) {
        Check& c = checks[k];
        try {
            if (k == 0) {
                const auto ex = trajectory_of("exact", cfg, sys, multi, times);
                const auto orc = trajectory_of("oracle-discrete", cfg, sys, multi, times);
                // components that vanish identically are measured against 1e-6 of the largest moment
                double global = 0.0;
                for (const auto& m : ex) global = std::max(global, to_moment_vector(m).cwiseAbs().maxCoeff());
                double worst = 0.0;
                for (int comp = 0; comp < 4; ++comp) {
                    double mx = 1e-6 * global, err = 0.0;
                    for (std::size_t i = 0; i < times.size(); ++i) {
                        const MomentVector a = to_moment_vector(ex[i]), b = to_moment_vector(orc[i]);
                        mx = std::max(mx, std::abs(a[comp]));
                        err = std::max(err, std::abs(a[comp] - b[comp]));
                    }
                    if (mx > 0.0) worst = std::max(worst, err / mx);
                }
                c.value = worst;
            } else if (k == 1 || k == 2) {
                if (!single) {
                    c.note = "skipped: truncated-Fock oracle is single-bath";
                    c.value = 0.0;
                    return;
                }
                const BathSpec& bath = multi.channels()[0].bath;
                const Generator g = br_generator(sys, bath);
                if (k == 1) {
                    const auto ft = parse_grid("0:0.5:20").values;
                    OracleConfig oc{cfg.numerics.oracle_N, cfg.numerics.oracle_nu_max, cfg.numerics.fock_n_max};
                    const auto fo = fock_oracle(sys, bath, oc, ft);
                    const auto tr = evolve(g, MomentVector::Zero(), ft);
                    double err = 0.0;
                    for (std::size_t i = 0; i < ft.size(); ++i)
                        err = std::max(err, (to_moment_vector(fo[i]) - tr.f[i]).cwiseAbs().maxCoeff());
                    c.value = err;
                } else {
                    // a non-Gaussian initial state exercises every entry of M and f0
                    const FockModel fm(sys, bath, cfg.numerics.fock_n_max);
                    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(fm.dimension());
                    psi(fm.index(1, 0)) = 1.0;
                    psi(fm.index(0, 1)) = std::polar(1.0, 0.7);
                    psi(fm.index(1, 1)) = 0.5;
                    const Eigen::MatrixXcd rho = fm.pure_state(psi);
                    const MomentVector f = to_moment_vector(fm.moments(rho));
                    const MomentVector d = to_moment_vector(fm.moments(fm.derivative(rho)));
                    c.value = (d - (-g.M * f + g.f0)).cwiseAbs().maxCoeff();
                }
            } else if (k == 3) {
                if (!single) {
                    c.note = "skipped: sum rule is stated for one coupling vector";
                    c.value = 0.0;
                    return;
                }
                const Generator g = spbr_generator(sys, multi.channels()[0].bath);
                c.value = sum_rule_residual(g, sys).cwiseAbs().maxCoeff() / std::max(1.0, g.M.cwiseAbs().maxCoeff());
            } else {
                const Generator g = multibath_generator(multi, sys, GeneratorKind::BR);
                const auto a = closed_form_eigenvalues(multi, sys), b = numeric_eigenvalues(g.M);
                double err = 0.0;
                for (int i = 0; i < 4; ++i) err = std::max(err, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(b[i])));
                c.value = err;
            }
        } catch (const TruncationError& e) {
            c.note = e.what();
        }
    });

    CommandResult r;
    r.table.label_column = "check";
    r.table.columns = {"value", "tolerance", "pass"};
    for (const auto& c : checks) {
        const bool pass = std::isfinite(c.value) && c.value <= c.tol;
        r.ok = r.ok && pass;
        r.table.labels.push_back(c.name);
        r.table.rows.push_back({c.value, c.tol, pass ? 1.0 : 0.0});
        if (!c.note.empty()) r.table.notes.push_back(c.name + ": " + c.note);
    }
    r.table.notes.push_back("validate ignores methods.list; exact-oracle check uses task.times (default 0:0.05:50)");
    return r;
}

CommandResult run_command(const std::string& command, const RunConfig& cfg, unsigned threads)
{
    if (command == "trajectory") return cmd_trajectory(cfg, threads);
    if (command == "sweep-detuning") return cmd_sweep_detuning(cfg, threads);
    if (command == "steady-state") return cmd_steady_state(cfg, threads);
    if (command == "poles") return cmd_poles(cfg, threads);
    if (command == "stability-map") return cmd_stability_map(cfg, threads);
    if (command == "validate") return cmd_validate(cfg, threads);
    throw ConfigError("unknown command '" + command + "'");
}

// ---- Output ----

std::string resolve_out_dir(const RunOptions& opt, const RunConfig& cfg)
{
    if (!opt.out_dir.empty()) return opt.out_dir;
    if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
    return cfg.output.dir;
}

void write_csv(std::ostream& out, const ResultTable& t, const std::string& command, const RunConfig& cfg)
{
    out << "# bathcoh " << kVersion << "\n";
    out << "# command: " << command << "\n";
    out << "# config begin\n";
    std::istringstream cfg_text(cfg.to_text());
    for (std::string line; std::getline(cfg_text, line);) out << "# " << line << "\n";
    out << "# config end\n";
    for (const auto& n : t.notes) out << "# note: " << n << "\n";

    bool first = true;
    auto cell = [&](const std::string& s) {
        out << (first ? "" : ",") << s;
        first = false;
    };
    if (!t.label_column.empty()) cell(t.label_column);
    for (const auto& c : t.columns) cell(c);
    out << "\n";
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        if (t.rows[i].size() != t.columns.size())
            throw std::logic_error("write_csv: row " + std::to_string(i) + " is not rectangular");
        first = true;
        if (!t.label_column.empty()) cell(t.labels.at(i));
        for (double v : t.rows[i]) cell(format_double(v));
        out << "\n";
    }
}

int run(const std::string& command, RunConfig cfg, const RunOptions& opt, std::ostream& log)
{
    if (!cfg.command.empty() && cfg.command != command)
        throw ConfigError("command '" + command + "' does not match task.command = " + cfg.command);
    cfg.command = command;
    cfg.output.dir = resolve_out_dir(opt, cfg);

    const CommandResult res = run_command(command, cfg, opt.threads);

    const std::filesystem::path dir(cfg.output.dir);
    std::filesystem::create_directories(dir);
    const auto csv = dir / (command + ".csv");
    {
        std::ofstream out(csv);
        if (!out) throw std::runtime_error("cannot write " + csv.string());
        write_csv(out, res.table, command, cfg);
    }
    log << "wrote " << csv.string() << " (" << res.table.rows.size() << " rows)\n";
    if (cfg.output.gnuplot && !res.plot.empty()) {
        const auto gp = dir / (command + ".gp");
        std::ofstream out(gp);
        if (!out) throw std::runtime_error("cannot write " + gp.string());
        out << "# bathcoh " << kVersion << " plot for " << csv.filename().string() << "\n" << res.plot;
        log << "wrote " << gp.string() << "\n";
    }
    if (!res.ok) {
        for (std::size_t i = 0; i < res.table.rows.size(); ++i)
            if (res.table.rows[i].back() == 0.0)
                log << "check failed: " << res.table.labels[i] << " = " << format_double(res.table.rows[i][0])
                    << " (tolerance " << format_double(res.table.rows[i][1]) << ")\n";
        return 1;
    }
    return 0;
}

}  // namespace bathcoh
