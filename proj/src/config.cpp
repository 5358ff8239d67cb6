// config.cpp — parsing, validation and re-emission of run configurations

#include "bathcoh/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace bathcoh {

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    return out;
}

bool to_number(const std::string& s, double& out)
{
    const char* b = s.data();
    const char* e = s.data() + s.size();
    if (b != e && *b == '+') ++b;
    const auto r = std::from_chars(b, e, out);
    return r.ec == std::errc() && r.ptr == e;
}

// One `key = value` entry with its source line.
struct Entry {
    std::string value;
    int line{0};
    bool used{false};
};

class Reader {
public:
    Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(int line, const std::string& msg) const
    {
        // line 0: the error concerns the configuration as a whole
        throw ConfigError(source_ + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + msg);
    }
    [[noreturn]] void fail_key(const std::string& key, const std::string& msg)
    {
        auto it = entries_.find(key);
        fail(it == entries_.end() ? 0 : it->second.line, "'" + key + "': " + msg);
    }

    void add(const std::string& key, const std::string& value, int line)
    {
        if (entries_.count(key)) fail(line, "duplicate key '" + key + "' (first on line " +
                                                std::to_string(entries_[key].line) + ")");
        entries_[key] = Entry{value, line, false};
    }

    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    std::optional<std::string> text(const std::string& key)
    {
        auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        it->second.used = true;
        return it->second.value;
    }

    std::optional<double> number(const std::string& key)
    {
        const auto t = text(key);
        if (!t) return std::nullopt;
        double v = 0.0;
        if (!to_number(*t, v) || !std::isfinite(v)) fail_key(key, "expected a finite number, got '" + *t + "'");
        return v;
    }

    std::vector<double> numbers(const std::string& key)
    {
        std::vector<double> out;
        const auto t = text(key);
        if (!t) return out;
        for (const auto& item : split(*t, ',')) {
            double v = 0.0;
            if (!to_number(item, v) || !std::isfinite(v)) fail_key(key, "expected a number list, got '" + item + "'");
            out.push_back(v);
        }
        return out;
    }

    GridSpec grid(const std::string& key)
    {
        const auto t = text(key);
        if (!t) return {};
        try {
            return parse_grid(*t);
        } catch (const ConfigError& e) {
            fail_key(key, e.what());
        }
    }

    std::set<std::string> sections() const
    {
        std::set<std::string> out;
        for (const auto& [k, e] : entries_) out.insert(k.substr(0, k.find('.')));
        return out;
    }

    // First line of a section, for errors that concern the section as a whole.
    int section_line(const std::string& sec) const
    {
        int line = 0;
        for (const auto& [k, e] : entries_)
            if (k.compare(0, sec.size() + 1, sec + ".") == 0 && (line == 0 || e.line < line)) line = e.line;
        return line;
    }

    void check_all_used()
    {
        for (const auto& [k, e] : entries_)
            if (!e.used) fail(e.line, "unknown key '" + k + "'");
    }

private:
    std::string source_;
    std::map<std::string, Entry> entries_;
};

bool is_bath_section(const std::string& s)
{
    if (s.rfind("bath", 0) != 0) return false;
    return std::all_of(s.begin() + 4, s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

BathBlock read_bath(Reader& r, const std::string& sec)
{
    BathBlock b;
    b.name = sec;
    const std::string type = r.text(sec + ".type").value_or("superohmic");
    auto req = [&](const std::string& k) {
        const auto v = r.number(sec + "." + k);
        if (!v) r.fail_key(sec + ".type", "bath type '" + type + "' requires " + sec + "." + k);
        return *v;
    };
    if (type == "superohmic") {
        b.spectral = SuperOhmic{req("J0"), req("omega0"), req("z")};
    } else if (type == "flat") {
        b.spectral = Flat{req("J0"), req("nu_min"), req("nu_max")};
    } else if (type == "multipeak") {
        MultiPeak m;
        const auto t = r.text(sec + ".peaks");
        if (!t) r.fail_key(sec + ".type", "bath type 'multipeak' requires " + sec + ".peaks");
        for (const auto& peak : split(*t, ';')) {
            std::istringstream in(peak);
            std::string a, w, z;
            in >> a >> w >> z;
            double J0 = 0, w0 = 0, zz = 0;
            std::string extra;
            if (!(to_number(a, J0) && to_number(w, w0) && to_number(z, zz)) || (in >> extra))
                r.fail_key(sec + ".peaks", "expected 'J0 omega0 z; ...', got '" + peak + "'");
            m.peaks.push_back(SuperOhmic{J0, w0, zz});
        }
        b.spectral = m;
    } else if (type == "tabulated") {
        b.spectral = Tabulated{r.numbers(sec + ".nu"), r.numbers(sec + ".J")};
    } else {
        r.fail_key(sec + ".type", "unknown bath type '" + type + "' (superohmic, flat, multipeak, tabulated)");
    }
    const auto kBT = r.number(sec + ".kBT");
    const auto n0 = r.number(sec + ".n0");
    if (kBT && n0) r.fail_key(sec + ".n0", "give either kBT or n0, not both");
    if (n0) b.occupation = FlatOccupation{*n0};
    else b.occupation = Thermal{kBT.value_or(Thermal{}.kBT)};
    b.phi_a = r.number(sec + ".phi_a");
    b.phi_b = r.number(sec + ".phi_b");
    try {
        BathSpec check(b.spectral, b.occupation);
    } catch (const DomainError& e) {
        r.fail(r.section_line(sec), "section '" + sec + "': " + e.what());
    }
    return b;
}

std::string join(const std::vector<double>& v, const char* sep)
{
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? sep : "") + format_double(v[k]);
    return s;
}

}  // namespace

std::string format_double(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

GridSpec parse_grid(const std::string& text)
{
    GridSpec g;
    g.text = trim(text);
    if (g.text.empty()) throw ConfigError("empty grid");
    if (g.text.find(':') != std::string::npos) {
        const auto parts = split(g.text, ':');
        double a = 0, h = 0, b = 0;
        if (parts.size() != 3 || !to_number(parts[0], a) || !to_number(parts[1], h) || !to_number(parts[2], b))
            throw ConfigError("expected 'start:step:stop', got '" + g.text + "'");
        if (!(h > 0.0) || !(b >= a)) throw ConfigError("grid needs step > 0 and stop >= start");
        const double n = std::floor((b - a) / h + 1e-9);
        if (n > 1e7) throw ConfigError("grid has more than 1e7 points");
        for (long k = 0; k <= static_cast<long>(n); ++k) g.values.push_back(a + static_cast<double>(k) * h);
    } else {
        for (const auto& item : split(g.text, ',')) {
            double v = 0;
            if (!to_number(item, v) || !std::isfinite(v)) throw ConfigError("bad grid value '" + item + "'");
            g.values.push_back(v);
        }
    }
    for (std::size_t k = 1; k < g.values.size(); ++k)
        if (!(g.values[k] > g.values[k - 1])) throw ConfigError("grid must be strictly increasing");
    return g;
}

RunConfig parse_config(const std::string& text, const std::string& source)
{
    Reader r(source);
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) r.fail(line, "expected 'section.key = value'");
        const std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
        if (key.find('.') == std::string::npos || key.front() == '.' || key.back() == '.')
            r.fail(line, "key '" + key + "' must have the form section.key");
        if (value.empty()) r.fail(line, "empty value for '" + key + "'");
        r.add(key, value, line);
    }

    RunConfig c;
    c.command = r.text("task.command").value_or("");
    c.omega_a = r.number("system.omega_a");
    c.omega_b = r.number("system.omega_b");
    c.Omega = r.number("system.Omega");
    c.Delta = r.number("system.Delta");
    c.phi_a = r.number("system.phi_a").value_or(c.phi_a);
    c.phi_b = r.number("system.phi_b").value_or(c.phi_b);
    const bool pair = c.omega_a || c.omega_b, centred = c.Omega || c.Delta;
    if (pair == centred || (pair && !(c.omega_a && c.omega_b)) || (centred && !(c.Omega && c.Delta)))
        r.fail(0, "give exactly one of (system.omega_a, system.omega_b) or (system.Omega, system.Delta)");

    // keys of unknown sections are reported by check_all_used with their line
    for (const auto& sec : r.sections())
        if (is_bath_section(sec)) c.baths.push_back(read_bath(r, sec));
    if (c.baths.empty()) r.fail(0, "at least one bath section (bath, bath2, ...) is required");

    c.times = r.grid("task.times");
    c.detunings = r.grid("task.detunings");
    c.centers = r.grid("task.centers");
    c.slice_time = r.number("task.slice_time");

    const std::string methods = r.text("methods.list").value_or("");
    for (const auto& m : split(methods, ',')) {
        if (m.empty()) continue;
        if (std::find(std::begin(kMethodNames), std::end(kMethodNames), m) == std::end(kMethodNames))
            r.fail_key("methods.list", "unknown method '" + m + "'");
        if (std::find(c.methods.begin(), c.methods.end(), m) != c.methods.end())
            r.fail_key("methods.list", "method '" + m + "' listed twice");
        c.methods.push_back(m);
    }
    if (c.methods.empty()) r.fail(0, "methods.list must name at least one method");

    if (const auto v = r.number("numerics.oracle_N")) {
        if (*v < 0 || *v != std::floor(*v)) r.fail_key("numerics.oracle_N", "must be a nonnegative integer");
        c.numerics.oracle_N = static_cast<std::size_t>(*v);
    }
    c.numerics.oracle_nu_max = r.number("numerics.oracle_nu_max").value_or(c.numerics.oracle_nu_max);
    if (const auto v = r.number("numerics.fock_n_max")) {
        if (*v < 1 || *v != std::floor(*v)) r.fail_key("numerics.fock_n_max", "must be an integer >= 1");
        c.numerics.fock_n_max = static_cast<int>(*v);
    }
    c.numerics.tol_oracle = r.number("numerics.tol_oracle").value_or(c.numerics.tol_oracle);
    c.numerics.tol_fock = r.number("numerics.tol_fock").value_or(c.numerics.tol_fock);

    c.output.dir = r.text("output.dir").value_or(c.output.dir);
    const std::string formats = r.text("output.formats").value_or("csv, gnuplot");
    c.output.gnuplot = false;
    for (const auto& f : split(formats, ',')) {
        if (f == "gnuplot") c.output.gnuplot = true;
        else if (f != "csv") r.fail_key("output.formats", "unknown format '" + f + "' (csv, gnuplot)");
    }

    r.check_all_used();
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

double RunConfig::base_omega_a() const { return omega_a ? *omega_a : *Omega + *Delta; }
double RunConfig::base_omega_b() const { return omega_b ? *omega_b : *Omega - *Delta; }

SystemSpec RunConfig::system() const { return SystemSpec(base_omega_a(), base_omega_b(), phi_a, phi_b); }

SystemSpec RunConfig::system_at_detuning(double D) const
{
    return SystemSpec(base_omega_a(), base_omega_a() - 2.0 * D, phi_a, phi_b);
}

MultiBathSpec RunConfig::multibath(const SystemSpec& sys) const
{
    std::vector<Channel> ch;
    for (const auto& b : baths)
        ch.push_back(Channel{BathSpec(b.spectral, b.occupation), b.phi_a.value_or(sys.phi_a()),
                             b.phi_b.value_or(sys.phi_b())});
    return MultiBathSpec(std::move(ch));
}

bool RunConfig::has_method(const std::string& m) const
{
    return std::find(methods.begin(), methods.end(), m) != methods.end();
}

std::string RunConfig::to_text() const
{
    std::ostringstream o;
    auto kv = [&](const std::string& k, const std::string& v) { o << k << " = " << v << "\n"; };
    if (!command.empty()) kv("task.command", command);
    if (omega_a) {
        kv("system.omega_a", format_double(*omega_a));
        kv("system.omega_b", format_double(*omega_b));
    } else {
        kv("system.Omega", format_double(*Omega));
        kv("system.Delta", format_double(*Delta));
    }
    kv("system.phi_a", format_double(phi_a));
    kv("system.phi_b", format_double(phi_b));
    for (const auto& b : baths) {
        const std::string s = b.name + ".";
        std::visit(
            [&](const auto& spec) {
                using T = std::decay_t<decltype(spec)>;
                if constexpr (std::is_same_v<T, SuperOhmic>) {
                    kv(s + "type", "superohmic");
                    kv(s + "J0", format_double(spec.J0));
                    kv(s + "omega0", format_double(spec.omega0));
                    kv(s + "z", format_double(spec.z));
                } else if constexpr (std::is_same_v<T, Flat>) {
                    kv(s + "type", "flat");
                    kv(s + "J0", format_double(spec.J0));
                    kv(s + "nu_min", format_double(spec.nu_min));
                    kv(s + "nu_max", format_double(spec.nu_max));
                } else if constexpr (std::is_same_v<T, MultiPeak>) {
                    kv(s + "type", "multipeak");
                    std::string peaks;
                    for (std::size_t k = 0; k < spec.peaks.size(); ++k)
                        peaks += (k ? "; " : "") + format_double(spec.peaks[k].J0) + " " +
                                 format_double(spec.peaks[k].omega0) + " " + format_double(spec.peaks[k].z);
                    kv(s + "peaks", peaks);
                } else {
                    kv(s + "type", "tabulated");
                    kv(s + "nu", join(spec.nu, ", "));
                    kv(s + "J", join(spec.J, ", "));
                }
            },
            b.spectral);
        if (const auto* t = std::get_if<Thermal>(&b.occupation)) kv(s + "kBT", format_double(t->kBT));
        else kv(s + "n0", format_double(std::get<FlatOccupation>(b.occupation).n0));
        if (b.phi_a) kv(s + "phi_a", format_double(*b.phi_a));
        if (b.phi_b) kv(s + "phi_b", format_double(*b.phi_b));
    }
    if (!times.empty()) kv("task.times", times.text);
    if (!detunings.empty()) kv("task.detunings", detunings.text);
    if (!centers.empty()) kv("task.centers", centers.text);
    if (slice_time) kv("task.slice_time", format_double(*slice_time));
    std::string m;
    for (std::size_t k = 0; k < methods.size(); ++k) m += (k ? ", " : "") + methods[k];
    kv("methods.list", m);
    kv("numerics.oracle_N", std::to_string(numerics.oracle_N));
    kv("numerics.oracle_nu_max", format_double(numerics.oracle_nu_max));
    kv("numerics.fock_n_max", std::to_string(numerics.fock_n_max));
    kv("numerics.tol_oracle", format_double(numerics.tol_oracle));
    kv("numerics.tol_fock", format_double(numerics.tol_fock));
    kv("output.dir", output.dir);
    kv("output.formats", output.gnuplot ? "csv, gnuplot" : "csv");
    return o.str();
}

}  // namespace bathcoh
