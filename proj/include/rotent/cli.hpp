#pragma once

// Command-line front end. Exit codes: 0 success, 2 config error, 3 numerical
// failure, 4 infeasible subspace.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rotent/analysis.hpp"
#include "rotent/anharmonic.hpp"
#include "rotent/errors.hpp"
#include "rotent/interaction.hpp"
#include "rotent/io.hpp"
#include "rotent/orbitals.hpp"
#include "rotent/trial.hpp"

namespace rotent::cli {

enum ExitCode : int { Ok = 0, ConfigFailure = 2, NumericalFailure = 3, Infeasible = 4 };

// ---------------------------------------------------------------------------
// Value parsing
// ---------------------------------------------------------------------------

inline int parse_int(const std::string& s, const std::string& field) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw ConfigError(field + ": '" + s + "' is not an integer");
    return v;
}

inline double parse_real(const std::string& s, const std::string& field) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v)) throw ConfigError(field + ": '" + s + "' is not a finite number");
    return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) parts.push_back(cur);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

/// "a", "a..b", or comma-separated mixtures of both; strictly increasing.
inline std::vector<int> parse_int_list(const std::string& s, const std::string& field) {
    std::vector<int> out;
    for (const auto& part : split(s, ',')) {
        const auto dots = part.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_int(part, field));
            continue;
        }
        const int a = parse_int(part.substr(0, dots), field), b = parse_int(part.substr(dots + 2), field);
        if (b < a) throw ConfigError(field + ": empty range '" + part + "'");
        for (int v = a; v <= b; ++v) out.push_back(v);
    }
    if (out.empty()) throw ConfigError(field + ": empty list");
    for (std::size_t k = 1; k < out.size(); ++k)
        if (out[k] <= out[k - 1]) throw ConfigError(field + ": values must be strictly increasing");
    return out;
}

/// "a..b" as a contiguous inclusive range (a single value is a one-point range).
inline std::pair<int, int> parse_int_range(const std::string& s, const std::string& field) {
    const auto v = parse_int_list(s, field);
    if (static_cast<int>(v.size()) != v.back() - v.front() + 1) throw ConfigError(field + ": expected a contiguous range a..b");
    return {v.front(), v.back()};
}

/// "x", "a..b:n" (n uniform points), or a comma-separated list.
inline std::vector<double> parse_real_grid(const std::string& s, const std::string& field) {
    const auto dots = s.find("..");
    if (dots != std::string::npos) {
        const auto colon = s.find(':', dots);
        if (colon == std::string::npos) throw ConfigError(field + ": range needs a point count, as in a..b:n");
        const double a = parse_real(s.substr(0, dots), field);
        const double b = parse_real(s.substr(dots + 2, colon - dots - 2), field);
        const int n = parse_int(s.substr(colon + 1), field);
        if (n < 1) throw ConfigError(field + ": point count must be >= 1");
        if (n > 1 && !(b > a)) throw ConfigError(field + ": range end must exceed its start");
        return uniform_grid(a, b, n);
    }
    std::vector<double> out;
    for (const auto& part : split(s, ',')) out.push_back(parse_real(part, field));
    if (out.empty()) throw ConfigError(field + ": empty list");
    return out;
}

inline io::Json int_array(const std::vector<int>& v) {
    io::Json a = io::Json::array();
    for (int x : v) a.push_back(x);
    return a;
}

// ---------------------------------------------------------------------------
// Shared output handling
// ---------------------------------------------------------------------------

struct OutputOptions {
    std::string path;          ///< empty: write the table to the provided stream
    std::string format = "csv";
};

class Output {
public:
    Output(const OutputOptions& o, std::ostream& fallback) : opts_(o) {
        if (opts_.format != "csv" && opts_.format != "json") throw ConfigError("format: must be csv or json");
        if (!opts_.path.empty()) {
            file_ = std::make_unique<std::ofstream>(opts_.path, std::ios::binary | std::ios::trunc);
            if (!*file_) throw ConfigError("out: cannot open '" + opts_.path + "' for writing");
            os_ = file_.get();
        } else {
            os_ = &fallback;
        }
    }

    bool csv() const { return opts_.format == "csv"; }

    /// Starts a streaming CSV table; rows can then be pushed as they complete.
    void begin(const io::Table& t) {
        if (csv()) writer_.emplace(*os_, t);
    }

    void row(io::Table& t, std::vector<io::Cell> cells) {
        if (writer_) writer_->row(cells);
        t.rows.push_back(std::move(cells));
    }

    /// Finishes the table; annotations go to `<out>.meta.json` and, for JSON
    /// output, into meta.annotations.
    void finish(const io::Table& t, const io::Json& annotations = io::Json()) {
        if (!csv()) io::write_json(*os_, t, annotations);
        os_->flush();
        if (!annotations.is_null() && !opts_.path.empty()) {
            std::ofstream side(opts_.path + ".meta.json", std::ios::binary | std::ios::trunc);
            if (!side) throw ConfigError("out: cannot write sidecar '" + opts_.path + ".meta.json'");
            io::Json doc;
            doc["meta"] = t.meta();
            doc["annotations"] = annotations;
            side << doc.dump(2) << "\n";
        }
    }

private:
    OutputOptions opts_;
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_ = nullptr;
    std::optional<io::CsvWriter> writer_;
};

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

struct ScanConfig {
    std::string stat;
    int n = 0;
    std::string interaction = "coulomb";
    double strength = 1.0;
    std::string l_range, dl_range;
    bool with_s2 = false;
    double tolerance = 1e-10;
    OutputOptions output;
};

inline io::Json scan_annotations(const ScanResult& res, Statistics stat) {
    io::Json a;
    Series s1, log_gap, ds1, energy;
    for (const auto& r : res.rows) {
        s1.emplace_back(r.l, r.s1);
        ds1.emplace_back(r.delta_l, r.delta_s1);
        energy.emplace_back(r.l, r.energy);
        if (r.log_l_minus_s1) log_gap.emplace_back(r.l, *r.log_l_minus_s1);
    }
    auto periods = [](const Series& s, const char* axis) {
        io::Json arr = io::Json::array();
        if (s.size() < 3) return arr;
        for (const auto& iv : oscillation_periods(s)) {
            io::Json o;
            o[std::string(axis) + "_begin"] = iv.l_begin;
            o[std::string(axis) + "_end"] = iv.l_end;
            o["period"] = iv.period;
            arr.push_back(o);
        }
        return arr;
    };
    auto extrema = [](const Series& s, ExtremumKind k) {
        return s.size() >= 3 ? int_array(local_extrema(s, k)) : io::Json::array();
    };
    if (stat == Statistics::Boson) {
        a["lnL_minus_S1_maxima_L"] = extrema(log_gap, ExtremumKind::Max);
        a["S1_minima_L"] = extrema(s1, ExtremumKind::Min);
        a["S1_periods"] = periods(s1, "L");
    } else {
        a["dS1_minima_dL"] = extrema(ds1, ExtremumKind::Min);
        a["dS1_maxima_dL"] = extrema(ds1, ExtremumKind::Max);
        a["dS1_periods"] = periods(ds1, "dL");
    }
    a["stable_L"] = energy.size() >= 2 ? int_array(stable_angular_momenta(energy)) : io::Json::array();
    io::Json degenerate = io::Json::array();
    for (const auto& r : res.rows)
        if (r.degenerate) degenerate.push_back(r.l);
    a["degenerate_L"] = degenerate;
    a["notes"] = res.notes;
    a["error"] = res.error ? io::Json(*res.error) : io::Json(nullptr);
    return a;
}

inline int cmd_scan(const ScanConfig& c, std::ostream& out, std::ostream& err) {
    if (c.n < 1) throw ConfigError("N: particle number must be >= 1 (got " + std::to_string(c.n) + ")");
    const auto stat = parse_statistics(c.stat);
    const Interaction inter{parse_kernel(c.interaction), c.strength};
    if (!(c.strength > 0.0)) throw ConfigError("strength: must be > 0");
    if (c.l_range.empty() == c.dl_range.empty()) throw ConfigError("L: give exactly one of --L or --dL");
    if (!(c.tolerance > 0.0)) throw ConfigError("tol: must be > 0");
    const int floor_l = minimal_angular_momentum(c.n, stat);
    auto [from, to] = c.l_range.empty() ? parse_int_range(c.dl_range, "dL") : parse_int_range(c.l_range, "L");
    if (from < 0) throw ConfigError(std::string(c.l_range.empty() ? "dL" : "L") + ": must be >= 0");
    if (!c.dl_range.empty()) {
        from += floor_l;
        to += floor_l;
    }
    if (to < floor_l)
        throw EmptySubspace("L: no " + std::string(to_string(stat)) + " states with N=" + std::to_string(c.n) +
                            " below L=" + std::to_string(floor_l));

    io::Table t;
    t.command = "scan";
    t.config["stat"] = to_string(stat);
    t.config["N"] = c.n;
    t.config["interaction"] = to_string(inter.kind);
    t.config["strength"] = io::rounded(inter.strength);
    t.config["L_from"] = from;
    t.config["L_to"] = to;
    t.config["s2"] = c.with_s2;
    t.config["tol"] = c.tolerance;
    t.columns = {"statistics", "N", "L", "dL", "dim", "E0", "S1", "lnL_minus_S1", "dS1", "S2", "occupations_json"};

    Output o(c.output, out);
    o.begin(t);
    ScanOptions opts;
    opts.with_s2 = c.with_s2;
    opts.lanczos.tolerance = c.tolerance;
    opts.on_row = [&](const ScanRow& r) {
        o.row(t, {std::string(to_string(r.statistics)), static_cast<long long>(r.n_particles), static_cast<long long>(r.l),
                  static_cast<long long>(r.delta_l), static_cast<long long>(r.dimension), r.energy, r.s1,
                  io::cell(r.log_l_minus_s1), r.delta_s1, io::cell(r.s2), r.occupations});
        if (r.degenerate) err << "note: L=" << r.l << " ground state is degenerate; entropies depend on the chosen vector\n";
    };
    const auto res = scan_subspaces(c.n, stat, inter, from, to, opts);
    for (const auto& note : res.notes) err << "note: " << note << "\n";
    o.finish(t, scan_annotations(res, stat));
    if (res.error) {
        err << "error: " << *res.error << "\n";
        return NumericalFailure;
    }
    return Ok;
}

struct SpecialConfig {
    std::string stat;
    std::string n_list;
    std::string subspace = "qh";
    int k = 0;
    std::string interaction = "coulomb";
    bool with_overlap = false;
    bool with_s2 = false;
    double tolerance = 1e-10;
    OutputOptions output;
};

inline int cmd_special(const SpecialConfig& c, std::ostream& out, std::ostream& err) {
    const auto stat = parse_statistics(c.stat);
    const auto kind = parse_kernel(c.interaction);
    const auto ns = parse_int_list(c.n_list, "N");
    if (ns.front() < 1) throw ConfigError("N: particle number must be >= 1 (got " + std::to_string(ns.front()) + ")");
    if (c.subspace != "qh" && c.subspace != "n") throw ConfigError("subspace: must be qh or n");
    const bool qh = c.subspace == "qh";
    if (qh && c.k < 1) throw ConfigError("k: must be >= 1 for the qh subspace");
    if (!qh && c.k != 0) throw ConfigError("k: only meaningful with --subspace qh");
    if (c.with_overlap && (!qh || stat != Statistics::Boson))
        throw ConfigError("overlap: trial states exist for bosons in the qh subspace only");

    io::Table t;
    t.command = "special";
    t.config["stat"] = to_string(stat);
    t.config["N"] = int_array(ns);
    t.config["subspace"] = c.subspace;
    t.config["k"] = c.k;
    t.config["interaction"] = to_string(kind);
    t.config["overlap"] = c.with_overlap;
    t.config["s2"] = c.with_s2;
    t.config["tol"] = c.tolerance;
    t.columns = {"N", "L", "S1", "prediction", "overlap", "dS1", "S2", "occupations_json"};

    Output o(c.output, out);
    o.begin(t);
    LanczosOptions lanczos;
    lanczos.tolerance = c.tolerance;
    std::vector<ProfilePoint> profiles;
    std::vector<std::pair<int, double>> s1_by_n;
    double worst = 0.0;
    for (int n : ns) {
        const int total_l = qh ? special_subspace_momentum(n, c.k, stat).total_l : n + minimal_angular_momentum(n, stat);
        const auto table = ElementTable::closed_form(kind, tight_orbital_bound(n, total_l, stat));
        GroundStateRecord gs;
        const auto row = solve_subspace(n, total_l, stat, table, 1.0, c.with_s2 && n >= 2, lanczos, &gs);
        std::optional<double> prediction, ov;
        if (qh) {
            prediction = qh_entropy_prediction(n, c.k, stat).s1;
            worst = std::max(worst, std::abs(row.s1 - *prediction));
        }
        if (c.with_overlap) {
            if (n <= TrialOptions{}.max_particles) {
                const auto trial = symmetrized_product(n, c.k);
                ov = overlap(trial, gs, trial.basis);
            } else {
                err << "note: N=" << n << " exceeds the trial-state cap; overlap left empty\n";
            }
        }
        if (row.degenerate) err << "note: N=" << n << " ground state is degenerate\n";
        o.row(t, {static_cast<long long>(n), static_cast<long long>(total_l), row.s1, io::cell(prediction), io::cell(ov),
                  row.delta_s1, io::cell(row.s2), row.occupations});
        profiles.push_back({n, row.occupations, row.delta_s1});
        s1_by_n.emplace_back(n, row.s1);
    }

    io::Json a;
    if (qh) {
        a["max_abs_S1_minus_prediction"] = io::rounded(worst);
    } else {
        bool decreasing = true;
        for (std::size_t k = 1; k < s1_by_n.size(); ++k) decreasing = decreasing && s1_by_n[k].second < s1_by_n[k - 1].second;
        a["S1_strictly_decreasing"] = decreasing;
        if (stat == Statistics::Fermion && profiles.size() >= 2) {
            const auto edge = edge_reconstruction_detector(profiles);
            io::Json classes = io::Json::object();
            for (const auto& [n, cls] : edge.classes) classes[std::to_string(n)] = to_string(cls);
            a["profile_class"] = classes;
            a["edge_transition_N"] = edge.transition ? io::Json(*edge.transition) : io::Json(nullptr);
            a["dS1_jump_at_transition"] = edge.entropy_jump;
        }
    }
    o.finish(t, a);
    return Ok;
}

struct TrialConfig {
    std::string n_list;
    int k = 1;
    std::string interaction = "contact";
    double tolerance = 1e-10;
    std::string amplitudes_path; ///< optional dump: N, index, occupations, amplitude
    OutputOptions output;
};

inline int cmd_trial(const TrialConfig& c, std::ostream& out, std::ostream&) {
    const auto kind = parse_kernel(c.interaction);
    const auto ns = parse_int_list(c.n_list, "N");
    if (ns.front() < 1) throw ConfigError("N: particle number must be >= 1 (got " + std::to_string(ns.front()) + ")");
    if (c.k < 1) throw ConfigError("k: must be >= 1");

    io::Table t;
    t.command = "trial";
    t.config["N"] = int_array(ns);
    t.config["k"] = c.k;
    t.config["interaction"] = to_string(kind);
    t.config["tol"] = c.tolerance;
    t.columns = {"N", "k", "Nbar", "L", "dim", "E0", "overlap"};

    Output o(c.output, out);
    o.begin(t);
    std::unique_ptr<std::ofstream> dump;
    if (!c.amplitudes_path.empty()) {
        dump = std::make_unique<std::ofstream>(c.amplitudes_path, std::ios::binary | std::ios::trunc);
        if (!*dump) throw ConfigError("amplitudes: cannot open '" + c.amplitudes_path + "' for writing");
        *dump << "# rotent " << io::version << " command=trial config_hash=" << t.config_hash() << "\n";
        *dump << "N,index,occupations,amplitude\n";
    }
    LanczosOptions lanczos;
    lanczos.tolerance = c.tolerance;
    for (int n : ns) {
        const auto trial = symmetrized_product(n, c.k);
        if (dump)
            for (std::size_t m = 0; m < trial.basis.dimension(); ++m)
                *dump << n << "," << m << "," << occupation_string(trial.basis.state(m)) << ","
                      << io::format_double(trial.amplitudes[m]) << "\n";
        const auto table = ElementTable::closed_form(kind, trial.basis.l_max());
        GroundStateRecord gs;
        solve_subspace(n, trial.total_l, Statistics::Boson, table, 1.0, false, lanczos, &gs);
        o.row(t, {static_cast<long long>(n), static_cast<long long>(c.k), static_cast<long long>(trial.nbar),
                  static_cast<long long>(trial.total_l), static_cast<long long>(trial.basis.dimension()), gs.energy,
                  overlap(trial, gs, trial.basis)});
    }
    o.finish(t);
    return Ok;
}

struct OrbitalsConfig {
    double lambda = 0.0;
    int l_max = -1;
    double r_max = TrapConfig{}.r_max;
    double log_step = TrapConfig{}.log_step;
    OutputOptions output;
};

inline int cmd_orbitals(const OrbitalsConfig& c, std::ostream& out, std::ostream&) {
    if (c.l_max < 0) throw ConfigError("lmax: must be >= 0");
    TrapConfig trap;
    trap.lambda = c.lambda;
    trap.r_max = c.r_max;
    trap.log_step = c.log_step;
    trap.validate();

    io::Table t;
    t.command = "orbitals";
    t.config["lambda"] = io::rounded(c.lambda);
    t.config["lmax"] = c.l_max;
    t.config["rmax"] = io::rounded(c.r_max);
    t.config["step"] = io::rounded(c.log_step);
    t.columns = {"l", "epsilon"};
    Output o(c.output, out);
    o.begin(t);
    const OrbitalSet set(c.l_max, trap);
    for (int l = 0; l <= c.l_max; ++l) o.row(t, {static_cast<long long>(l), set.energy(l)});
    o.finish(t);
    return Ok;
}

struct AnharmonicConfig {
    std::string n_list = "5";
    std::optional<int> l;
    std::string subspace = "n";
    double lambda = 0.005;
    std::string strengths = "-0.05..0.05:21";
    bool without_s2 = false;
    double tolerance = 1e-10;
    OutputOptions output;
};

inline int cmd_anharmonic(const AnharmonicConfig& c, std::ostream& out, std::ostream& err) {
    const auto ns = parse_int_list(c.n_list, "N");
    if (ns.front() < 1) throw ConfigError("N: particle number must be >= 1 (got " + std::to_string(ns.front()) + ")");
    if (c.subspace != "n" && c.subspace != "laughlin") throw ConfigError("subspace: must be n or laughlin");
    if (c.l && ns.size() != 1) throw ConfigError("L: a fixed --L needs a single N; use --subspace for N lists");
    if (c.l && *c.l < 0) throw ConfigError("L: must be >= 0");
    const auto grid = parse_real_grid(c.strengths, "U0");
    AnharmonicOptions opts;
    opts.lanczos.tolerance = c.tolerance;

    io::Table t;
    t.command = "anharmonic";
    t.config["N"] = int_array(ns);
    t.config["L"] = c.l ? io::Json(*c.l) : io::Json(nullptr);
    t.config["subspace"] = c.l ? io::Json(nullptr) : io::Json(c.subspace);
    t.config["lambda"] = io::rounded(c.lambda);
    io::Json g = io::Json::array();
    for (double u : grid) g.push_back(io::rounded(u));
    t.config["U0"] = g;
    t.config["s2"] = !c.without_s2;
    t.config["tol"] = c.tolerance;
    t.columns = {"N", "L", "lambda", "U0", "E0", "S1", "S2"};

    Output o(c.output, out);
    o.begin(t);
    io::Json a = io::Json::array();
    for (int n : ns) {
        const int total_l = c.l ? *c.l : (c.subspace == "n" ? n : n * (n - 1));
        const auto rows = strength_scan(n, total_l, c.lambda, grid, !c.without_s2, opts);
        io::Json entry;
        entry["N"] = n;
        entry["L"] = total_l;
        io::Json degenerate = io::Json::array(), crossings = io::Json::array();
        for (std::size_t k = 0; k < rows.size(); ++k) {
            const auto& r = rows[k];
            o.row(t, {static_cast<long long>(n), static_cast<long long>(total_l), r.lambda, r.strength, r.energy,
                      io::cell(r.s1), io::cell(r.s2)});
            if (r.degenerate) {
                degenerate.push_back(io::rounded(r.strength));
                err << "note: N=" << n << " L=" << total_l << " U0=" << io::format_double(r.strength)
                    << " ground state is degenerate; entropies omitted\n";
            }
            if (k > 0) {
                double s = 0.0;
                for (std::size_t m = 0; m < r.amplitudes.size(); ++m) s += r.amplitudes[m] * rows[k - 1].amplitudes[m];
                if (std::abs(s) < 0.5) {
                    io::Json x = io::Json::array({io::rounded(rows[k - 1].strength), io::rounded(r.strength)});
                    crossings.push_back(x);
                    err << "note: N=" << n << " L=" << total_l << " level crossing between U0="
                        << io::format_double(rows[k - 1].strength) << " and " << io::format_double(r.strength) << "\n";
                }
            }
        }
        entry["degenerate_U0"] = degenerate;
        entry["level_crossings_U0"] = crossings;
        a.push_back(entry);
    }
    o.finish(t, a);
    return Ok;
}

struct ElementsConfig {
    std::string interaction = "coulomb";
    int l_max = -1;
    OutputOptions output;
};

inline int cmd_elements(const ElementsConfig& c, std::ostream& out, std::ostream&) {
    if (c.l_max < 0) throw ConfigError("lmax: must be >= 0");
    const auto kind = parse_kernel(c.interaction);
    io::Table t;
    t.command = "elements";
    t.config["interaction"] = to_string(kind);
    t.config["lmax"] = c.l_max;
    t.columns = {"i", "j", "k", "l", "value"};
    Output o(c.output, out);
    o.begin(t);
    const auto table = ElementTable::closed_form(kind, c.l_max);
    for (int i = 0; i <= c.l_max; ++i)
        for (int j = 0; j <= c.l_max; ++j)
            for (int k = 0; k <= c.l_max; ++k) {
                const int l = i + j - k;
                if (l < 0 || l > c.l_max) continue;
                char buf[40];
                std::snprintf(buf, sizeof buf, "%.17g", table(i, j, k, l));
                o.row(t, {static_cast<long long>(i), static_cast<long long>(j), static_cast<long long>(k),
                          static_cast<long long>(l), std::string(buf)});
            }
    o.finish(t);
    return Ok;
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

inline void add_output(CLI::App* app, OutputOptions& o) {
    app->add_option("--out,-o", o.path, "Output file (default: stdout)");
    app->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Entanglement of rotating Bose and Fermi gases in the lowest Landau level", "rotent"};
    app.set_version_flag("--version", std::string(io::version));
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "Worker threads (0: runtime default)")->check(CLI::NonNegativeNumber);

    ScanConfig scan;
    auto* s = app.add_subcommand("scan", "Ground-state entanglement in every L subspace of a range");
    s->add_option("--stat", scan.stat, "boson or fermion")->required();
    s->add_option("--N", scan.n, "Particle number")->required();
    s->add_option("--interaction", scan.interaction, "contact or coulomb");
    s->add_option("--strength", scan.strength, "Interaction prefactor (> 0)");
    s->add_option("--L", scan.l_range, "Total angular momentum range a..b");
    s->add_option("--dL", scan.dl_range, "Range of L above its minimum N(N-1)/2 (fermions) or 0 (bosons)");
    s->add_flag("--s2", scan.with_s2, "Also compute the two-particle entropy");
    s->add_option("--tol", scan.tolerance, "Lanczos relative tolerance");
    add_output(s, scan.output);

    SpecialConfig special;
    auto* sp = app.add_subcommand("special", "Ground states of the special subspaces across N");
    sp->add_option("--stat", special.stat, "boson or fermion")->required();
    sp->add_option("--N", special.n_list, "Particle numbers: a..b or a list")->required();
    sp->add_option("--subspace", special.subspace, "qh: L=(N-Nbar)(N+Nbar-k)/k; n: L=N (dL=N for fermions)");
    sp->add_option("--k", special.k, "Block count of the qh subspace");
    sp->add_option("--interaction", special.interaction, "contact or coulomb");
    sp->add_flag("--overlap", special.with_overlap, "Overlap with the symmetrized Laughlin product (bosons, N <= 8)");
    sp->add_flag("--s2", special.with_s2, "Also compute the two-particle entropy");
    sp->add_option("--tol", special.tolerance, "Lanczos relative tolerance");
    add_output(sp, special.output);

    TrialConfig trial;
    auto* tr = app.add_subcommand("trial", "Overlap of the symmetrized Laughlin product with the exact ground state");
    tr->add_option("--N", trial.n_list, "Particle numbers: a..b or a list")->required();
    tr->add_option("--k", trial.k, "Number of Laughlin blocks");
    tr->add_option("--interaction", trial.interaction, "contact or coulomb");
    tr->add_option("--tol", trial.tolerance, "Lanczos relative tolerance");
    tr->add_option("--amplitudes", trial.amplitudes_path, "Also write the trial-state Fock amplitudes to this CSV");
    add_output(tr, trial.output);

    OrbitalsConfig orb;
    auto* ob = app.add_subcommand("orbitals", "Single-particle energies in the quadratic-plus-quartic trap");
    ob->add_option("--lambda", orb.lambda, "Quartic coefficient");
    ob->add_option("--lmax", orb.l_max, "Highest orbital")->required();
    ob->add_option("--rmax", orb.r_max, "Outer grid edge");
    ob->add_option("--step", orb.log_step, "Grid step in ln r");
    add_output(ob, orb.output);

    AnharmonicConfig anh;
    auto* an = app.add_subcommand("anharmonic", "Entanglement versus contact strength in the quartic trap");
    an->add_option("--N", anh.n_list, "Particle numbers: a..b or a list");
    an->add_option("--L", anh.l, "Fixed total angular momentum (single N only)");
    an->add_option("--subspace", anh.subspace, "n: L=N; laughlin: L=N(N-1)");
    an->add_option("--lambda", anh.lambda, "Quartic coefficient");
    an->add_option("--U0", anh.strengths, "Strength grid: a..b:n or a list, within [-0.05, 0.05]");
    an->add_flag("--no-s2", anh.without_s2, "Skip the two-particle entropy");
    an->add_option("--tol", anh.tolerance, "Lanczos relative tolerance");
    add_output(an, anh.output);

    ElementsConfig el;
    auto* em = app.add_subcommand("elements", "Two-body matrix elements of the analytic orbitals");
    em->add_option("--interaction", el.interaction, "contact or coulomb");
    em->add_option("--lmax", el.l_max, "Highest orbital")->required();
    add_output(em, el.output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return ConfigFailure;
    }

    try {
#ifdef _OPENMP
        if (threads > 0) omp_set_num_threads(threads);
#endif
        if (s->parsed()) return cmd_scan(scan, out, err);
        if (sp->parsed()) return cmd_special(special, out, err);
        if (tr->parsed()) return cmd_trial(trial, out, err);
        if (ob->parsed()) return cmd_orbitals(orb, out, err);
        if (an->parsed()) return cmd_anharmonic(anh, out, err);
        if (em->parsed()) return cmd_elements(el, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return ConfigFailure;
    } catch (const EmptySubspace& e) {
        err << "infeasible subspace: " << e.what() << "\n";
        return Infeasible;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return NumericalFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return NumericalFailure;
    }
    return ConfigFailure;
}

} // namespace rotent::cli
