// disperse: grid uniform-dispersion simulator and experiment driver.
//
// Subcommands:
//   run       simulate one algorithm on one environment, emit CSV/trace/render
//   bench     sweep (environment family, size, algorithm, p) cells
//   validate  inspect a map: size, topology, corner/hall counts, distances
//   tasep     exclusion-process flux experiment
//   couple    coupled region/path/TASEP run with inequality checks

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "disperse/engine.hpp"
#include "disperse/generate.hpp"
#include "disperse/metrics.hpp"
#include "disperse/registry.hpp"
#include "disperse/render.hpp"
#include "disperse/tasep.hpp"

using namespace disperse;

namespace {

uint64_t default_seed() {
    if (const char* env = std::getenv("DISPERSE_SEED")) return std::strtoull(env, nullptr, 10);
    return 0;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

bool parse_cell(const std::string& text, Cell& out) {
    size_t comma = text.find(',');
    if (comma == std::string::npos) return false;
    try {
        out.x = std::stoi(text.substr(0, comma));
        out.y = std::stoi(text.substr(comma + 1));
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

struct EnvChoice {
    Environment env;
    std::string id;
};

// --gen square:K | carved:K:R | gkr:K:R | path:N
EnvChoice build_gen(const std::string& spec, const Cell& source, uint64_t seed) {
    auto parts = split(spec, ':');
    auto arg = [&](size_t i) { return std::stoi(parts.at(i)); };
    if (parts[0] == "square") {
        int k = arg(1);
        return {gen_square(k, source),
                "square-" + std::to_string(k) + "-s" + std::to_string(source.x) + "-" +
                    std::to_string(source.y)};
    }
    if (parts[0] == "carved") {
        int k = arg(1), r = arg(2);
        return {gen_carved(k, r, seed),
                "carved-" + std::to_string(k) + "-r" + std::to_string(r)};
    }
    if (parts[0] == "gkr") {
        int k = arg(1), r = arg(2);
        return {gen_gkr(k, r), "gkr-" + std::to_string(k) + "-" + std::to_string(r)};
    }
    if (parts[0] == "path") {
        int n = arg(1);
        return {gen_path(n), "path-" + std::to_string(n)};
    }
    throw std::runtime_error("unknown generator '" + parts[0] +
                             "' (square:K, carved:K:R, gkr:K:R, path:N)");
}

Environment load_map_file(const std::string& path, const Cell& source) {
    const std::string text = read_file(path);
    if (text.rfind("type ", 0) == 0) return load_movingai(text, source);
    return from_ascii(text);
}

std::string map_env_id(const std::string& path, const Cell& source) {
    std::string base = path;
    if (size_t slash = base.find_last_of('/'); slash != std::string::npos)
        base = base.substr(slash + 1);
    for (char& ch : base)
        if (ch == ',') ch = '_';
    return "map-" + base + "-s" + std::to_string(source.x) + "-" + std::to_string(source.y);
}

int64_t auto_step_limit(const Environment& env, const Schedule& sched) {
    const int64_t n = env.size();
    if (sched.synchronous_kind()) return 2 * n + 8;
    return int64_t(std::ceil(8.0 * double(n + 1) / alpha(sched.p))) + 1000;
}

void append_csv(const std::string& path, const std::string& row) {
    bool need_header = true;
    {
        std::ifstream probe(path, std::ios::binary);
        need_header = !probe.good() || probe.peek() == std::ifstream::traits_type::eof();
    }
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw std::runtime_error("cannot write " + path);
    if (need_header) out << csv_header() << '\n';
    out << row << '\n';
}

// ---------------------------------------------------------------------------

int cmd_run(const std::string& gen_spec, const std::string& map_path, std::string source_text,
            bool repair, const std::string& alg, bool sync, double p, uint64_t seed, int trials,
            int64_t step_limit, const std::string& csv_path, const std::string& render_path,
            int64_t render_at, const std::string& trace_path) {
    Cell source{0, 0};
    if (!source_text.empty() && !parse_cell(source_text, source)) {
        std::cerr << "error: --source must be X,Y\n";
        return 1;
    }

    EnvChoice chosen = map_path.empty()
                           ? build_gen(gen_spec, source, seed)
                           : EnvChoice{load_map_file(map_path, source), map_env_id(map_path, source)};
    Environment env = chosen.env;

    if (requires_simply_connected(alg) && !is_simply_connected(env)) {
        if (repair) {
            env = repair_holes(env);
        } else {
            std::cerr << "error: environment is not simply connected (" << hole_count(env)
                      << " enclosed hole component(s)); '" << alg
                      << "' requires it. Re-run with --repair to fill holes.\n";
            return 1;
        }
    }
    if (!sync && alg != "asynch-fcdfs")
        std::cerr << "note: '" << alg << "' is a synchronous algorithm; --p is ignored\n";

    for (int j = 0; j < trials; ++j) {
        const uint64_t trial_seed = derive_seed(seed, uint64_t(j));
        const Schedule sched = (sync || alg != "asynch-fcdfs")
                                   ? Schedule::synchronous()
                                   : Schedule::bernoulli(p, trial_seed);
        const int64_t limit = step_limit > 0 ? step_limit : auto_step_limit(env, sched);

        auto policy = make_policy(alg);
        const bool want_trace = !trace_path.empty() || !render_path.empty();
        Trace trace(Trace::Mask::movement());
        World world(env);
        Engine engine(world, *policy, sched, want_trace ? &trace : nullptr);
        RunResult result = engine.run(limit);
        if (!result.complete()) {
            std::cerr << "error: step limit " << limit << " exceeded on " << chosen.id
                      << " (trial " << j << ", " << world.settled_count() << "/" << env.size()
                      << " settled)\n";
            return 2;
        }

        const MetricsReport report = compute_metrics(world);
        const OptimalBaselines opt = optimal_baselines(env);
        const std::string row = csv_row(chosen.id, alg, sched.synchronous_kind() ? 1.0 : sched.p,
                                        trial_seed, report, opt);
        if (csv_path.empty()) {
            if (j == 0) std::cout << csv_header() << '\n';
            std::cout << row << '\n';
        } else {
            append_csv(csv_path, row);
        }

        if (j == 0 && !trace_path.empty()) write_file(trace_path, trace.serialize());
        if (j == 0 && !render_path.empty()) {
            const int64_t at = render_at < 0 ? result.makespan : render_at;
            if (at > result.makespan) {
                std::cerr << "error: --at " << at << " is past the end of the run ("
                          << result.makespan << ")\n";
                return 1;
            }
            auto replay_policy = make_policy(alg);
            World snapshot(env);
            Engine replay_engine(snapshot, *replay_policy, sched);
            while (snapshot.clock() < at) replay_engine.step();
            const std::string out = render_path.size() > 4 &&
                                            render_path.substr(render_path.size() - 4) == ".svg"
                                        ? render_svg(snapshot, replay_policy.get())
                                        : render_ascii(snapshot, replay_policy.get());
            write_file(render_path, out);
        }
    }
    return 0;
}

int cmd_bench(const std::string& k_list, const std::string& algs, const std::string& p_list,
              const std::string& families, int trials, uint64_t seed, double removal_frac,
              const std::string& source_text, const std::string& csv_path) {
    std::vector<int> ks;
    for (const auto& s : split(k_list, ',')) ks.push_back(std::stoi(s));
    std::vector<double> ps;
    for (const auto& s : split(p_list, ',')) ps.push_back(std::stod(s));
    const auto alg_names = split(algs, ',');
    const auto family_names = split(families, ',');

    std::optional<Cell> fixed_source;
    if (!source_text.empty()) {
        Cell c;
        if (!parse_cell(source_text, c)) {
            std::cerr << "error: --source must be X,Y\n";
            return 1;
        }
        fixed_source = c;
    }

    std::ostringstream out;
    out << "family,k,n,algorithm,p,trials,M_mean,M_std,T_total_mean,T_total_std,T_max_mean,"
           "T_max_std,E_total_mean,E_total_std,E_max_mean,E_max_std\n";

    for (const auto& family : family_names)
        for (int k : ks)
            for (const auto& alg : alg_names) {
                const std::vector<double> alg_ps =
                    alg == "asynch-fcdfs" ? ps : std::vector<double>{1.0};
                for (double p : alg_ps) {
                    std::vector<MetricsReport> reports;
                    int n_cells = 0;
                    for (int j = 0; j < trials; ++j) {
                        const uint64_t cell_seed =
                            derive_seed(seed, mix64(uint64_t(k) ^ mix64(uint64_t(j) + 1)));
                        SplitMix rng(cell_seed);
                        Environment env = [&] {
                            if (family == "carved") {
                                const int removals = int(removal_frac * k * k);
                                return gen_carved(k, removals, cell_seed);
                            }
                            Cell src = fixed_source ? *fixed_source
                                                    : Cell{int(rng.below(uint64_t(k))),
                                                           int(rng.below(uint64_t(k)))};
                            return gen_square(k, src);
                        }();
                        n_cells = env.size();
                        auto policy = make_policy(alg);
                        const Schedule sched = alg == "asynch-fcdfs"
                                                   ? Schedule::bernoulli(p, cell_seed)
                                                   : Schedule::synchronous();
                        World world(env);
                        Engine engine(world, *policy, sched);
                        RunResult r = engine.run(auto_step_limit(env, sched));
                        if (!r.complete()) {
                            std::cerr << "error: bench run did not complete (family=" << family
                                      << " k=" << k << " alg=" << alg << " trial=" << j << ")\n";
                            return 2;
                        }
                        reports.push_back(compute_metrics(world));
                    }
                    auto stat = [&](auto getter) {
                        double mean = 0, var = 0;
                        for (const auto& r : reports) mean += double(getter(r));
                        mean /= double(reports.size());
                        for (const auto& r : reports) {
                            double d = double(getter(r)) - mean;
                            var += d * d;
                        }
                        var /= double(reports.size());
                        return std::pair<double, double>{mean, std::sqrt(var)};
                    };
                    auto [m_mean, m_std] = stat([](const MetricsReport& r) { return r.makespan; });
                    auto [tt_mean, tt_std] =
                        stat([](const MetricsReport& r) { return r.travel_total; });
                    auto [tm_mean, tm_std] =
                        stat([](const MetricsReport& r) { return r.travel_max; });
                    auto [et_mean, et_std] =
                        stat([](const MetricsReport& r) { return r.energy_total; });
                    auto [em_mean, em_std] =
                        stat([](const MetricsReport& r) { return r.energy_max; });
                    out << family << ',' << k << ',' << n_cells << ',' << alg << ','
                        << format_p(alg == "asynch-fcdfs" ? p : 1.0) << ',' << trials << ','
                        << m_mean << ',' << m_std << ',' << tt_mean << ',' << tt_std << ','
                        << tm_mean << ',' << tm_std << ',' << et_mean << ',' << et_std << ','
                        << em_mean << ',' << em_std << '\n';
                }
            }

    if (csv_path.empty())
        std::cout << out.str();
    else
        write_file(csv_path, out.str());
    return 0;
}

int cmd_validate(const std::string& map_path, const std::string& gen_spec,
                 std::string source_text) {
    Cell source{0, 0};
    if (!source_text.empty() && !parse_cell(source_text, source)) {
        std::cerr << "error: --source must be X,Y\n";
        return 1;
    }
    EnvChoice chosen = map_path.empty() ? build_gen(gen_spec, source, default_seed())
                                        : EnvChoice{load_map_file(map_path, source),
                                                    map_env_id(map_path, source)};
    const Environment& env = chosen.env;

    int corners = 0, halls = 0;
    for (int id = 0; id < env.size(); ++id) {
        VertexClass vc = classify(env, env.cell(id));
        corners += vc.is_corner() ? 1 : 0;
        halls += vc.is_hall() ? 1 : 0;
    }
    const auto dist = bfs_distances(env, env.source());
    long long sum = 0, max = 0;
    for (int d : dist) {
        sum += d;
        max = std::max<long long>(max, d);
    }
    const bool sc = is_simply_connected(env);
    std::cout << "environment:      " << chosen.id << '\n'
              << "cells (n):        " << env.size() << '\n'
              << "source:           (" << env.source().x << ',' << env.source().y << ")\n"
              << "connected:        yes (component of source)\n"
              << "simply connected: " << (sc ? "yes" : "no") << '\n';
    if (!sc) std::cout << "hole components:  " << hole_count(env) << '\n';
    std::cout << "corners:          " << corners << '\n'
              << "halls:            " << halls << '\n'
              << "sum dist(s,v):    " << sum << '\n'
              << "max dist(s,v):    " << max << '\n';
    if (env.size() <= 20000) {
        const Cell median = optimal_source(env);
        std::cout << "geometric median: (" << median.x << ',' << median.y << ")\n";
    }
    return 0;
}

int cmd_tasep(const std::string& p_list, int seeds, int64_t steps, int64_t sample_every,
              uint64_t seed, const std::string& csv_path) {
    std::ostringstream out;
    out << "p,seed,t,F_t,alpha_t_estimate\n";
    for (const auto& p_text : split(p_list, ',')) {
        const double p = std::stod(p_text);
        alpha(p);  // validates the range
        for (int s = 0; s < seeds; ++s) {
            const uint64_t run_seed = derive_seed(seed, uint64_t(s));
            TasepState state{int(steps)};
            const int64_t every = sample_every > 0 ? sample_every : std::max<int64_t>(1, steps / 200);
            for (int64_t t = 1; t <= steps; ++t) {
                state.step_coupled(run_seed, p);
                if (t % every == 0 || t == steps)
                    out << format_p(p) << ',' << run_seed << ',' << t << ',' << state.flux()
                        << ',' << double(state.flux()) / double(t) << '\n';
            }
        }
    }
    if (csv_path.empty())
        std::cout << out.str();
    else
        write_file(csv_path, out.str());
    return 0;
}

int cmd_couple(const std::string& gen_spec, const std::string& p_list, int seeds, uint64_t seed,
               int64_t step_limit) {
    int total_violations = 0, runs = 0, makespan_bound_ok = 0;
    for (const auto& p_text : split(p_list, ',')) {
        const double p = std::stod(p_text);
        for (int s = 0; s < seeds; ++s) {
            const uint64_t env_seed = derive_seed(seed, uint64_t(2 * s));
            const uint64_t run_seed = derive_seed(seed, uint64_t(2 * s + 1));
            EnvChoice chosen = build_gen(gen_spec, {0, 0}, env_seed);
            const int64_t limit =
                step_limit > 0
                    ? step_limit
                    : int64_t(std::ceil(6.0 * double(chosen.env.size() + 1) / alpha(p))) + 64;
            CouplingReport rep = coupled_run(chosen.env, p, run_seed, limit);
            ++runs;
            total_violations += int(rep.violations.size());
            if (rep.region_makespan >= 0 && rep.first_flux_over_n >= 0 &&
                rep.region_makespan <= rep.first_flux_over_n)
                ++makespan_bound_ok;
            std::cout << "env=" << chosen.id << " p=" << format_p(p) << " seed=" << run_seed
                      << " n=" << rep.n << " violations=" << rep.violations.size()
                      << " region_makespan=" << rep.region_makespan
                      << " first_t_flux_gt_n=" << rep.first_flux_over_n << '\n';
            for (const auto& v : rep.violations)
                std::cout << "  violation t=" << v.t << " agent=" << v.agent << ": " << v.what
                          << '\n';
        }
    }
    std::cout << "total violations: " << total_violations << '\n'
              << "makespan <= first-crossing time: " << makespan_bound_ok << "/" << runs << '\n';
    return total_violations == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"uniform dispersion simulator"};
    app.require_subcommand(1);

    std::string gen_spec = "square:10", map_path, source_text, alg = "fcdfs";
    std::string csv_path, render_path, trace_path;
    bool sync = false, repair = false;
    double p = 1.0;
    uint64_t seed = default_seed();
    int trials = 1;
    int64_t step_limit = 0, render_at = -1;

    auto* run = app.add_subcommand("run", "simulate one algorithm on one environment");
    run->add_option("--gen", gen_spec, "generator: square:K | carved:K:R | gkr:K:R | path:N");
    run->add_option("--map", map_path, "map file (ASCII or MovingAI)");
    run->add_option("--source", source_text, "source cell X,Y");
    run->add_flag("--repair", repair, "fill enclosed holes before running");
    run->add_option("--alg", alg, "algorithm name");
    run->add_flag("--sync", sync, "synchronous schedule");
    run->add_option("--p", p, "Bernoulli wake probability in (0,1]");
    run->add_option("--seed", seed, "master seed (default: $DISPERSE_SEED or 0)");
    run->add_option("--trials", trials, "trial count; trial j uses seed hash(seed,j)");
    run->add_option("--step-limit", step_limit, "abort after this many steps");
    run->add_option("--csv", csv_path, "append metric rows to this CSV");
    run->add_option("--render", render_path, "write a snapshot (.svg or ASCII)");
    run->add_option("--at", render_at, "snapshot step (default: final)");
    run->add_option("--trace", trace_path, "write the movement trace");

    std::string k_list = "10,20,30", algs = "fcdfs,bflf,dflf", p_list = "0.5,0.75";
    std::string families = "square,carved";
    double removal_frac = 0.2;
    int bench_trials = 10;
    auto* bench = app.add_subcommand("bench", "sweep sizes/algorithms, aggregate CSV");
    bench->add_option("--k", k_list, "comma list of grid sizes");
    bench->add_option("--algs", algs, "comma list of algorithms");
    bench->add_option("--p", p_list, "comma list of p values (asynch-fcdfs only)");
    bench->add_option("--families", families, "square,carved");
    bench->add_option("--trials", bench_trials, "trials per cell");
    bench->add_option("--seed", seed, "master seed");
    bench->add_option("--removal-frac", removal_frac, "carved: fraction of cells removed");
    bench->add_option("--source", source_text, "fix the source (default: random per trial)");
    bench->add_option("--csv", csv_path, "output CSV path (default stdout)");

    auto* validate = app.add_subcommand("validate", "inspect a map or generated environment");
    validate->add_option("--map", map_path, "map file");
    validate->add_option("--gen", gen_spec, "generator spec");
    validate->add_option("--source", source_text, "source cell X,Y");

    std::string tasep_p = "0.5,0.75,1";
    int tasep_seeds = 10;
    int64_t tasep_steps = 20000, sample_every = 0;
    auto* tasep = app.add_subcommand("tasep", "exclusion process flux experiment");
    tasep->add_option("--p", tasep_p, "comma list of p values");
    tasep->add_option("--seeds", tasep_seeds, "seeds per p");
    tasep->add_option("--steps", tasep_steps, "steps per run");
    tasep->add_option("--sample-every", sample_every, "CSV sampling stride");
    tasep->add_option("--seed", seed, "master seed");
    tasep->add_option("--csv", csv_path, "output CSV path (default stdout)");

    std::string couple_gen = "carved:15:40", couple_p = "0.5,0.75";
    int couple_seeds = 10;
    auto* couple = app.add_subcommand("couple", "coupled region/path/TASEP checks");
    couple->add_option("--gen", couple_gen, "environment generator spec");
    couple->add_option("--p", couple_p, "comma list of p values");
    couple->add_option("--seeds", couple_seeds, "seeds per p");
    couple->add_option("--seed", seed, "master seed");
    couple->add_option("--step-limit", step_limit, "override the adaptive step limit");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(gen_spec, map_path, source_text, repair, alg, sync, p, seed, trials,
                           step_limit, csv_path, render_path, render_at, trace_path);
        if (bench->parsed())
            return cmd_bench(k_list, algs, p_list, families, bench_trials, seed, removal_frac,
                             source_text, csv_path);
        if (validate->parsed()) return cmd_validate(map_path, gen_spec, source_text);
        if (tasep->parsed())
            return cmd_tasep(tasep_p, tasep_seeds, tasep_steps, sample_every, seed, csv_path);
        if (couple->parsed()) return cmd_couple(couple_gen, couple_p, couple_seeds, seed, step_limit);
    } catch (const SimulationError& e) {
        std::cerr << "simulation invariant violated: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
