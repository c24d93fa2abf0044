// trinet: three-node wireless network analysis CLI.
//
// Subcommands sweep powers or gains, map winning relay strategies, evaluate
// side-information multicast schemes, and run seeded conference Monte Carlo
// studies. All outputs are deterministic functions of the flags (including
// the seed) and independent of the worker count.
//
// Exit codes: 0 success, 2 configuration error, 3 infeasible single-shot query.

#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "trinet/trinet.hpp"

using namespace trinet;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;

struct Options {
    std::string gains;
    bool db = false;
    double power = 1.0;
    bool power_set = false;
    std::string power_range;
    std::string h12_range;
    std::string h23_range;
    std::string grid;
    std::uint64_t seed = 0;
    bool seed_set = false;
    long draws = 10000;
    std::string out;
    std::string pmf;
    std::string entropies;
    std::string plot;
    std::string hist_out;
    std::string config; // consumed by preprocessing, registered for help only
    double db_span = 20.0;
    int alphabet = 2;
    int threads = 0;
};

struct Sweep {
    std::vector<double> values;
    std::string label;
};

std::vector<double> split_doubles(const std::string& s, char sep) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, sep)) {
        std::size_t pos = 0;
        out.push_back(std::stod(tok, &pos));
        if (pos != tok.size()) throw std::invalid_argument("bad number '" + tok + "'");
    }
    return out;
}

ChannelGains parse_gains(const Options& o) {
    if (o.gains.empty()) throw std::invalid_argument("--gains a,b,c is required");
    auto v = split_doubles(o.gains, ',');
    if (v.size() != 3) throw std::invalid_argument("--gains needs exactly three values");
    if (o.db)
        for (auto& x : v) x = amplitude_from_db(x);
    return ChannelGains(v[0], v[1], v[2]);
}

// "lo:hi:steps", log-spaced
std::vector<double> parse_range(const std::string& s) {
    auto v = split_doubles(s, ':');
    if (v.size() != 3) throw std::invalid_argument("range must be lo:hi:steps, got '" + s + "'");
    double lo = v[0], hi = v[1];
    int n = int(v[2]);
    if (!(lo > 0.0) || !(hi >= lo) || n < 1) throw std::invalid_argument("bad range '" + s + "'");
    std::vector<double> out;
    if (n == 1 || hi == lo) {
        out.push_back(lo);
        return out;
    }
    double ratio = std::log(hi / lo);
    for (int i = 0; i < n; ++i) out.push_back(lo * std::exp(ratio * i / (n - 1)));
    return out;
}

GridSpec parse_grid(const std::string& s, GridSpec fallback) {
    if (s.empty()) return fallback;
    auto v = split_doubles(s, ',');
    if (v.size() != 3) throw std::invalid_argument("--grid must be res,rounds,shrink");
    GridSpec g{int(v[0]), int(v[1]), v[2]};
    g.validate();
    return g;
}

Sweep pick_sweep(const Options& o, const std::string& def_power_range) {
    if (!o.power_range.empty() && !o.h23_range.empty())
        throw std::invalid_argument("choose one of --power-range / --h23-range");
    if (!o.h23_range.empty()) return {parse_range(o.h23_range), "h23"};
    if (!o.power_range.empty()) return {parse_range(o.power_range), "P"};
    if (o.power_set) return {{o.power}, "P"};
    return {parse_range(def_power_range), "P"};
}

int thread_count(const Options& o) {
    if (o.threads > 0) return o.threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

// Runs fn(i) for i in [0,n) on `threads` workers; exceptions resurface here.
template <typename Fn>
void parallel_rows(std::size_t n, int threads, Fn&& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto work = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

void emit(const Options& o, const CsvTable& table, PlotKind kind,
          const std::vector<std::string>& comments = {}) {
    std::string csv_name = o.out.empty() ? "table.csv" : o.out;
    if (!o.out.empty()) {
        std::ofstream f(o.out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open --out path " + o.out);
        table.write(f);
    } else {
        table.write(std::cout);
    }
    for (const auto& c : comments) std::cout << "# " << c << '\n';
    if (!o.plot.empty()) {
        std::ofstream f(o.plot, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open --plot-script path " + o.plot);
        f << plot_script(table, kind, csv_name);
    }
}

std::string order_str(const std::array<int, 3>& ord) {
    std::string s;
    for (int i = 0; i < 3; ++i) {
        if (i) s += '-';
        s += char('0' + ord[i]);
    }
    return s;
}

JointPmf load_pmf(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open --pmf file " + path);
    return read_pmf(f);
}

// -------------------------
// relay-sweep
// -------------------------

int cmd_relay_sweep(const Options& o) {
    ChannelGains base = parse_gains(o);
    Sweep sweep = pick_sweep(o, "0.01:100:25");
    GridSpec grid = parse_grid(o.grid, GridSpec{17, 3, 0.2});

    CsvTable t;
    t.header = {sweep.label, "R_ro", "R_odf", "R_df", "R_cf", "R_fb", "bound_bf", "bound_mr"};
    t.rows.resize(sweep.values.size());
    parallel_rows(sweep.values.size(), thread_count(o), [&](std::size_t i) {
        double v = sweep.values[i];
        ChannelGains g = base;
        double P = o.power;
        if (sweep.label == "P")
            P = v;
        else
            g.h23 = v;
        auto b = cut_set_bounds(g, P);
        t.rows[i] = {fmt_num(v),
                     fmt_num(relay_off_rate(g, P)),
                     fmt_num(rate_odf_opt(g, P).rate),
                     fmt_num(rate_df_opt(g, P, grid).rate),
                     fmt_num(rate_cf_opt(g, P, grid).rate),
                     fmt_num(rate_fb_opt(g, P, grid).rate),
                     fmt_num(b.beamforming),
                     fmt_num(b.multireceiver)};
    });
    emit(o, t, PlotKind::lines);
    return kExitOk;
}

// -------------------------
// relay-region
// -------------------------

int cmd_relay_region(const Options& o) {
    if (o.h12_range.empty() || o.h23_range.empty())
        throw std::invalid_argument("relay-region needs --h12-range and --h23-range");
    std::vector<double> h12s = parse_range(o.h12_range);
    std::vector<double> h23s = parse_range(o.h23_range);
    GridSpec grid = parse_grid(o.grid, GridSpec{9, 3, 0.25});
    double P = o.power;
    const double margin = 1e-4;

    CsvTable t;
    t.header = {"h12", "h23", "winner", "winner_code"};
    t.rows.resize(h12s.size() * h23s.size());
    parallel_rows(t.rows.size(), thread_count(o), [&](std::size_t idx) {
        ChannelGains g{h12s[idx / h23s.size()], 1.0, h23s[idx % h23s.size()]};
        double ro = relay_off_rate(g, P);
        double df = rate_df_opt(g, P, grid).rate;
        double cf = rate_cf_opt(g, P, grid).rate;
        double fb = rate_fb_opt(g, P, grid).rate;
        double best = std::max({ro, df, cf, fb});
        // ties resolve to the simplest winning strategy
        const char* name;
        int code;
        if (ro >= best - margin) {
            name = "OFF";
            code = 0;
        } else if (df >= best - margin) {
            name = "DF";
            code = 1;
        } else if (cf >= best - margin) {
            name = "CF";
            code = 2;
        } else {
            name = "FB";
            code = 3;
        }
        t.rows[idx] = {fmt_num(g.h12), fmt_num(g.h23), name, std::to_string(code)};
    });
    emit(o, t, PlotKind::region);
    return kExitOk;
}

// -------------------------
// multicast-sweep
// -------------------------

int cmd_multicast_sweep(const Options& o) {
    ChannelGains base = parse_gains(o);
    Sweep sweep = pick_sweep(o, "0.01:100:25");
    GridSpec grid = parse_grid(o.grid, GridSpec{33, 3, 0.2});

    CsvTable t;
    t.header = {sweep.label, "R_noncoop", "R_df_mc", "R_greedy", "bound_bf", "bound_mr"};
    t.rows.resize(sweep.values.size());
    parallel_rows(sweep.values.size(), thread_count(o), [&](std::size_t i) {
        double v = sweep.values[i];
        ChannelGains g = base;
        double P = o.power;
        if (sweep.label == "P")
            P = v;
        else
            g.h23 = v;
        auto b = cut_set_bounds(g, P);
        t.rows[i] = {fmt_num(v),
                     fmt_num(rate_noncoop_mc(g, P)),
                     fmt_num(df_mc_optimal(g, P).rate),
                     fmt_num(rate_greedy_mc_opt(g, P, grid).rate),
                     fmt_num(b.beamforming),
                     fmt_num(b.multireceiver)};
    });
    emit(o, t, PlotKind::lines);
    return kExitOk;
}

// -------------------------
// sideinfo
// -------------------------

int cmd_sideinfo(const Options& o) {
    ChannelGains g = parse_gains(o);
    double H12, H13;
    if (!o.entropies.empty()) {
        auto v = split_doubles(o.entropies, ',');
        if (v.size() != 2) throw std::invalid_argument("--entropies needs H12,H13");
        H12 = v[0];
        H13 = v[1];
    } else if (!o.pmf.empty()) {
        JointPmf p = load_pmf(o.pmf);
        H12 = cond_entropy(p, var_set({1}), var_set({2}));
        H13 = cond_entropy(p, var_set({1}), var_set({3}));
    } else {
        throw std::invalid_argument("sideinfo needs --entropies or --pmf");
    }
    Sweep sweep = pick_sweep(o, "1e-5:10:61");
    if (sweep.label != "P") throw std::invalid_argument("sideinfo sweeps power only");

    CsvTable t;
    t.header = {"P",      "tau_separate", "tau_degraded", "tau_coop", "tau_coop_fb",
                "E_separate", "E_degraded",   "E_coop",       "E_coop_fb"};
    t.rows.resize(sweep.values.size());
    parallel_rows(sweep.values.size(), thread_count(o), [&](std::size_t i) {
        double P = sweep.values[i];
        SideInfoInstance inst{g, P, H12, H13};
        TauResult rs[4] = {tau_separate(inst), tau_degraded(inst), tau_coop(inst),
                           tau_coop_fb_opt(inst)};
        auto& row = t.rows[i];
        row.push_back(fmt_num(P));
        for (const auto& r : rs) row.push_back(fmt_num(r.feasible ? r.tau : kInf));
        for (const auto& r : rs) row.push_back(fmt_num(r.feasible ? r.tau * P : kInf));
    });
    emit(o, t, PlotKind::lines);
    return kExitOk;
}

// -------------------------
// conference-genie
// -------------------------

int cmd_conference_genie(const Options& o) {
    ChannelGains g = parse_gains(o);
    EntropyBundle b;
    if (!o.pmf.empty())
        b = bundle(load_pmf(o.pmf));
    else if (o.seed_set)
        b = bundle(random_pmf(o.seed, o.alphabet, o.alphabet, o.alphabet));
    else
        throw std::invalid_argument("conference-genie needs --pmf or --seed");

    Sweep sweep = pick_sweep(o, "1:1:1");
    if (sweep.label != "P") throw std::invalid_argument("conference-genie sweeps power only");

    CsvTable t;
    t.header = {"P",
                "tau_genie",
                "tau_coop_opt",
                "order_coop_opt",
                "tau_coop_greedy",
                "order_coop_greedy",
                "tau_degraded_opt",
                "order_degraded_opt",
                "tau_degraded_greedy",
                "order_degraded_greedy"};
    t.rows.resize(sweep.values.size());
    std::atomic<bool> any_feasible{false};
    parallel_rows(sweep.values.size(), thread_count(o), [&](std::size_t i) {
        double P = sweep.values[i];
        double gen = genie_tau(b, g, P);
        ScheduleReport co = optimal_schedule(b, g, P, Scheme::coop);
        ScheduleReport cg = greedy_schedule(b, g, P, Scheme::coop);
        ScheduleReport no = optimal_schedule(b, g, P, Scheme::degraded);
        ScheduleReport ng = greedy_schedule(b, g, P, Scheme::degraded);
        if (std::isfinite(gen) && co.feasible) any_feasible = true;
        t.rows[i] = {fmt_num(P),        fmt_num(gen),      fmt_num(co.total), order_str(co.order),
                     fmt_num(cg.total), order_str(cg.order), fmt_num(no.total), order_str(no.order),
                     fmt_num(ng.total), order_str(ng.order)};
    });
    emit(o, t, PlotKind::lines);
    return any_feasible ? kExitOk : kExitInfeasible;
}

// -------------------------
// conference-mc
// -------------------------

struct DrawResult {
    ChannelGains g{1, 1, 1};
    ConferenceEnergies e;
    std::uint64_t stream = 0; // per-draw sub-stream identifier
    bool excluded = true;
    double db_oc = 0, db_gc = 0, db_nc = 0;
};

int cmd_conference_mc(const Options& o) {
    if (!o.seed_set) throw std::invalid_argument("conference-mc requires --seed");
    if (o.draws < 1) throw std::invalid_argument("--draws must be positive");
    const long n = o.draws;
    SplitMix64 root(o.seed);
    ConferenceScan scan = fast_conference_scan();

    std::vector<DrawResult> res(n);
    parallel_rows(std::size_t(n), thread_count(o), [&](std::size_t i) {
        SplitMix64 rng = root.fork(i);
        auto amp = [&] { return amplitude_from_db(-o.db_span + 2.0 * o.db_span * rng.next_unit()); };
        DrawResult& r = res[i];
        r.stream = rng.state;
        r.g = ChannelGains{amp(), amp(), amp()};
        EntropyBundle b = bundle(random_pmf(rng.next(), o.alphabet, o.alphabet, o.alphabet));
        r.e = conference_energies(b, r.g, scan);
        bool ok = r.e.genie.feasible && r.e.coop_optimal.feasible && r.e.coop_greedy.feasible &&
                  r.e.degraded_optimal.feasible && r.e.genie.energy > 0.0;
        if (!ok) return;
        auto db_ratio = [&](double e) { return 10.0 * std::log10(e / r.e.genie.energy); };
        r.db_oc = db_ratio(r.e.coop_optimal.energy);
        r.db_gc = db_ratio(r.e.coop_greedy.energy);
        r.db_nc = db_ratio(r.e.degraded_optimal.energy);
        r.excluded = !(std::isfinite(r.db_oc) && std::isfinite(r.db_gc) && std::isfinite(r.db_nc));
    });

    CsvTable t;
    t.header = {"draw",  "seed", "h12",   "h13",   "h23",   "E_gen",   "E_oc",
                "E_gc",  "E_nc", "db_oc", "db_gc", "db_nc", "excluded"};
    long excluded = 0, gc3 = 0, nc3 = 0, close_sched = 0, gc_ge_oc = 0, included = 0;
    const int kBuckets = 20; // 0.5 dB buckets over [0, 10), plus overflow
    std::vector<long> hist_gc(kBuckets + 1, 0), hist_nc(kBuckets + 1, 0);
    for (long i = 0; i < n; ++i) {
        const DrawResult& r = res[i];
        auto& row = t.add_row();
        row = {std::to_string(i),
               std::to_string(r.stream),
               fmt_num(r.g.h12),
               fmt_num(r.g.h13),
               fmt_num(r.g.h23),
               fmt_num(r.e.genie.feasible ? r.e.genie.energy : kInf),
               fmt_num(r.e.coop_optimal.feasible ? r.e.coop_optimal.energy : kInf),
               fmt_num(r.e.coop_greedy.feasible ? r.e.coop_greedy.energy : kInf),
               fmt_num(r.e.degraded_optimal.feasible ? r.e.degraded_optimal.energy : kInf),
               r.excluded ? "inf" : fmt_num(r.db_oc),
               r.excluded ? "inf" : fmt_num(r.db_gc),
               r.excluded ? "inf" : fmt_num(r.db_nc),
               r.excluded ? "1" : "0"};
        if (r.excluded) {
            ++excluded;
            continue;
        }
        ++included;
        if (r.db_gc <= 3.0) ++gc3;
        if (r.db_nc <= 3.0) ++nc3;
        if (r.e.coop_greedy.energy <= 1.01 * r.e.coop_optimal.energy) ++close_sched;
        if (r.e.coop_greedy.energy >= r.e.coop_optimal.energy - 1e-12) ++gc_ge_oc;
        auto bucket = [&](double db) {
            int k = int(std::floor(std::max(db, 0.0) / 0.5));
            return std::min(k, kBuckets);
        };
        ++hist_gc[bucket(r.db_gc)];
        ++hist_nc[bucket(r.db_nc)];
    }

    CsvTable hist;
    hist.header = {"bucket_db", "frac_coop_greedy", "frac_noncoop"};
    for (int k = 0; k <= kBuckets; ++k) {
        std::string label = k < kBuckets
                                ? fmt_num(0.5 * k) + "-" + fmt_num(0.5 * (k + 1))
                                : std::string("10+");
        hist.add_row() = {label, fmt_num(included ? double(hist_gc[k]) / included : 0.0),
                          fmt_num(included ? double(hist_nc[k]) / included : 0.0)};
    }
    if (!o.hist_out.empty()) {
        std::ofstream f(o.hist_out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open --hist-out path " + o.hist_out);
        hist.write(f);
        if (!o.plot.empty()) {
            std::ofstream pf(o.plot, std::ios::binary);
            if (!pf) throw std::runtime_error("cannot open --plot-script path " + o.plot);
            pf << plot_script(hist, PlotKind::histogram, o.hist_out);
        }
    }

    std::vector<std::string> summary;
    summary.push_back("draws=" + std::to_string(n) + " included=" + std::to_string(included) +
                      " excluded=" + std::to_string(excluded));
    auto frac = [&](long c) { return included ? fmt_num(double(c) / included) : std::string("nan"); };
    summary.push_back("frac_coop_greedy_within_3db=" + frac(gc3));
    summary.push_back("frac_noncoop_within_3db=" + frac(nc3));
    summary.push_back("frac_greedy_within_1pct_of_optimal=" + frac(close_sched));
    summary.push_back("frac_greedy_energy_ge_optimal=" + frac(gc_ge_oc));

    Options o2 = o;
    if (!o.hist_out.empty()) o2.plot.clear(); // plot script already written against hist table
    emit(o2, t, PlotKind::lines, summary);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"three-node wireless network: rates, bandwidth expansion, energy"};
    app.require_subcommand(1);
    app.option_defaults()->take_last();

    Options o;
    auto add_common = [&](CLI::App* c, bool with_gains) {
        if (with_gains) {
            c->add_option("--gains", o.gains, "channel amplitudes h12,h13,h23");
            c->add_flag("--db", o.db, "interpret --gains as power dB (h^2 = 10^(v/10))");
        }
        c->add_option("--power", o.power, "total per-state power P")
            ->check(CLI::NonNegativeNumber)
            ->each([&](const std::string&) { o.power_set = true; });
        c->add_option("--power-range", o.power_range, "log-spaced P sweep lo:hi:steps");
        c->add_option("--grid", o.grid, "optimizer grid res,rounds,shrink");
        c->add_option("--seed", o.seed, "RNG seed")->each([&](const std::string&) {
            o.seed_set = true;
        });
        c->add_option("--draws", o.draws, "Monte Carlo draw count");
        c->add_option("--out", o.out, "CSV output path (default stdout)");
        c->add_option("--pmf", o.pmf, "joint pmf file: 'n1 n2 n3' then probabilities");
        c->add_option("--entropies", o.entropies, "direct residual entropies H12,H13");
        c->add_option("--threads", o.threads, "worker threads (0 = hardware)");
        c->add_option("--plot-script", o.plot, "write a gnuplot script here");
        c->add_option("--config", o.config, "key=value file; flags override it");
        return c;
    };

    auto* sweep = add_common(app.add_subcommand("relay-sweep", "relay strategy rates"), true);
    sweep->add_option("--h23-range", o.h23_range, "sweep h23 instead of P (lo:hi:steps)");

    auto* region =
        add_common(app.add_subcommand("relay-region", "winning strategy map, h13 = 1"), false);
    region->add_option("--h12-range", o.h12_range, "h12 grid lo:hi:steps")->required();
    region->add_option("--h23-range", o.h23_range, "h23 grid lo:hi:steps")->required();

    auto* mc = add_common(app.add_subcommand("multicast-sweep", "multicast rates"), true);
    mc->add_option("--h23-range", o.h23_range, "sweep h23 instead of P (lo:hi:steps)");

    add_common(app.add_subcommand("sideinfo", "multicast with side information"), true);

    add_common(app.add_subcommand("conference-genie", "genie bound and schedules"), true);

    auto* cmc = add_common(app.add_subcommand("conference-mc", "seeded conference energy study"),
                           false);
    cmc->add_option("--db-span", o.db_span, "gain amplitude span in power dB (default +/-20)");
    cmc->add_option("--alphabet", o.alphabet, "source alphabet size per node")
        ->check(CLI::Range(2, 8));
    cmc->add_option("--hist-out", o.hist_out, "write dB-ratio histogram CSV here");

    // config file preprocessing: inject key=value pairs as flags before the
    // user's own flags so the command line wins
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] == "--config") {
            std::ifstream f(args[i + 1]);
            if (!f) {
                std::cerr << "error: cannot open config file " << args[i + 1] << '\n';
                return kExitConfig;
            }
            std::vector<std::string> injected;
            std::string line;
            while (std::getline(f, line)) {
                if (line.empty() || line[0] == '#') continue;
                auto eq = line.find('=');
                if (eq == std::string::npos) {
                    std::cerr << "error: config line without '=': " << line << '\n';
                    return kExitConfig;
                }
                injected.push_back("--" + line.substr(0, eq) + "=" + line.substr(eq + 1));
            }
            args.insert(args.begin() + 1, injected.begin(), injected.end());
            break;
        }
    }

    try {
        std::vector<const char*> cargv;
        cargv.push_back(argv[0]);
        for (const auto& a : args) cargv.push_back(a.c_str());
        app.parse(int(cargv.size()), cargv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (app.got_subcommand("relay-sweep")) return cmd_relay_sweep(o);
        if (app.got_subcommand("relay-region")) return cmd_relay_region(o);
        if (app.got_subcommand("multicast-sweep")) return cmd_multicast_sweep(o);
        if (app.got_subcommand("sideinfo")) return cmd_sideinfo(o);
        if (app.got_subcommand("conference-genie")) return cmd_conference_genie(o);
        if (app.got_subcommand("conference-mc")) return cmd_conference_mc(o);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}
