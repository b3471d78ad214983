#include "multgame/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "multgame/exact_count.hpp"
#include "multgame/measure.hpp"
#include "multgame/server.hpp"
#include "multgame/session.hpp"
#include "multgame/simulator.hpp"
#include "multgame/solver.hpp"
#include "multgame/strategies.hpp"

namespace multgame {

namespace {

using nlohmann::json;

enum class Format { Plain, Json, Csv };

Format parse_format(const std::string& s) {
    if (s == "plain") return Format::Plain;
    if (s == "json") return Format::Json;
    if (s == "csv") return Format::Csv;
    throw ValidationError("unknown format '" + s + "' (expected json, csv or plain)");
}

std::string fixed(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

std::string full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct WinningSetOpts {
    std::string digits;
    std::string intervals;
    std::string json_text;

    void add(CLI::App* cmd) {
        cmd->add_option("--digits", digits, "Casino's winning leading digits, e.g. 1,2,3");
        cmd->add_option("--intervals", intervals, "Casino's winning mantissa intervals, e.g. 1:4,5:6");
        cmd->add_option("--winning-set", json_text, "Winning set as JSON");
    }

    IntervalUnion get() const {
        const int given = !digits.empty() + !intervals.empty() + !json_text.empty();
        if (given > 1) throw ValidationError("give only one of --digits, --intervals, --winning-set");
        if (!digits.empty()) return parse_digits(digits);
        if (!intervals.empty()) return parse_intervals(intervals);
        if (!json_text.empty()) return interval_union_from_json(parse_json(json_text));
        return parse_digits("1,2,3");
    }

    static json parse_json(const std::string& text) {
        auto j = json::parse(text, nullptr, false);
        if (j.is_discarded()) throw ValidationError("invalid JSON: " + text);
        return j;
    }
};

Strategy strategy_arg(const std::string& text, const Strategy& fallback) {
    if (text.empty()) return fallback;
    return Strategy::from_json(WinningSetOpts::parse_json(text));
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
    if (seed) return *seed;
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::vector<std::size_t> parse_index_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        std::size_t used = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(tok, &used);
        } catch (const std::exception&) {
            throw ValidationError("not an element index: '" + tok + "'");
        }
        if (used != tok.size() || tok[0] == '-') throw ValidationError("not an element index: '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

GameMatrix parse_matrix_rows(const std::string& text) {
    std::vector<std::vector<int>> rows;
    std::stringstream ss(text);
    std::string row;
    while (std::getline(ss, row, ';')) {
        std::vector<int> r;
        std::stringstream rs(row);
        std::string tok;
        while (std::getline(rs, tok, ',')) {
            if (tok == "0") r.push_back(0);
            else if (tok == "1") r.push_back(1);
            else throw ValidationError("matrix entries must be 0 or 1, got '" + tok + "'");
        }
        rows.push_back(std::move(r));
    }
    return GameMatrix::from_rows(rows);
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    auto j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ValidationError("'" + path + "' is not valid JSON");
    return j;
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"Multiplication game engine: values, exact counts, simulation and live play"};
    app.require_subcommand(1);
    std::string format_text = "plain";
    app.add_option("--format", format_text, "Output format: json, csv or plain")->capture_default_str();

    // value / fair-payout
    WinningSetOpts value_w;
    int value_precision = 10;
    auto* value_cmd = app.add_subcommand("value", "Game value beta(W): casino win probability under optimal play");
    value_w.add(value_cmd);
    value_cmd->add_option("--precision", value_precision, "Decimal places in plain output");
    value_cmd->add_option("--format", format_text);

    WinningSetOpts fair_w;
    int fair_precision = 4;
    auto* fair_cmd = app.add_subcommand("fair-payout", "Win return per unit stake that makes the game fair");
    fair_w.add(fair_cmd);
    fair_cmd->add_option("--precision", fair_precision, "Decimal places in plain output");
    fair_cmd->add_option("--format", format_text);

    // count
    WinningSetOpts count_w;
    int count_n = 1;
    bool count_naive = false;
    unsigned count_threads = 0;
    auto* count_cmd = app.add_subcommand("count", "Exact casino/player counts over all pairs of n-digit integers");
    count_w.add(count_cmd);
    count_cmd->add_option("-n", count_n, "Digit count (1..8)")->required();
    count_cmd->add_flag("--naive", count_naive, "Enumerate every pair instead of threshold counting");
    count_cmd->add_option("--threads", count_threads, "Worker threads (0 = all cores)");
    count_cmd->add_option("--format", format_text);

    // limit
    WinningSetOpts limit_w;
    auto* limit_cmd = app.add_subcommand("limit", "Casino win probability when both mantissas are uniform on [1,10)");
    limit_w.add(limit_cmd);
    limit_cmd->add_option("--format", format_text);

    // vy
    WinningSetOpts vy_w;
    double vy_y = 1.0;
    auto* vy_cmd = app.add_subcommand("vy", "Casino numbers that beat a player number y");
    vy_w.add(vy_cmd);
    vy_cmd->add_option("--y", vy_y, "Player number in [1,10)")->required();
    vy_cmd->add_option("--format", format_text);

    // gap
    WinningSetOpts gap_w;
    int gap_n = 1;
    std::optional<double> gap_y;
    int gap_samples = 200;
    std::optional<std::uint64_t> gap_seed;
    auto* gap_cmd = app.add_subcommand("gap", "|beta_n(V_y) - beta(V_y)| for one y, or its max over random y");
    gap_w.add(gap_cmd);
    gap_cmd->add_option("-n", gap_n, "Digits of the beta_n grid")->required();
    gap_cmd->add_option("--y", gap_y, "Player number in [1,10)");
    gap_cmd->add_option("--samples", gap_samples, "Random y values when --y is absent");
    gap_cmd->add_option("--seed", gap_seed, "Seed for the random y values");
    gap_cmd->add_option("--format", format_text);

    // simulate
    WinningSetOpts sim_w;
    std::uint64_t sim_rounds = 100;
    std::uint64_t sim_sessions = 1;
    std::string sim_casino, sim_player, sim_payout = "100:140", sim_trajectory;
    std::optional<std::uint64_t> sim_seed;
    unsigned sim_threads = 0;
    auto* sim_cmd = app.add_subcommand("simulate", "Seeded Monte Carlo sessions with payout accounting");
    sim_w.add(sim_cmd);
    sim_cmd->add_option("--rounds", sim_rounds, "Rounds per session");
    sim_cmd->add_option("--sessions", sim_sessions, "Independent sessions");
    sim_cmd->add_option("--strategy,--casino", sim_casino, "Casino strategy JSON (default benford)");
    sim_cmd->add_option("--player", sim_player, "Player strategy JSON (default uniform_digits n=3)");
    sim_cmd->add_option("--payout", sim_payout, "STAKE:RETURN in currency units");
    sim_cmd->add_option("--seed", sim_seed, "Seed (printed when omitted)");
    sim_cmd->add_option("--trajectory", sim_trajectory, "Write the per-round CSV trajectory here");
    sim_cmd->add_option("--threads", sim_threads, "Worker threads for multi-session runs");
    sim_cmd->add_option("--format", format_text);

    // group
    std::size_t group_cyclic = 0, group_dihedral = 0;
    std::string group_table, group_w;
    bool group_solve = false;
    auto* group_cmd = app.add_subcommand("group", "Value of the group game with normalized counting measure");
    group_cmd->add_option("--cyclic", group_cyclic, "Use the cyclic group of this order");
    group_cmd->add_option("--dihedral", group_dihedral, "Use the dihedral group of the m-gon");
    group_cmd->add_option("--table", group_table, "Group JSON file {order, table, labels}");
    group_cmd->add_option("--w", group_w, "Casino's winning elements, e.g. 0,1,2")->required();
    group_cmd->add_flag("--solve", group_solve, "Also run fictitious play on the payoff matrix");
    group_cmd->add_option("--format", format_text);

    // matrix
    std::string matrix_rows, matrix_file;
    double matrix_tol = 1e-4;
    std::uint64_t matrix_iter = 1'000'000;
    std::string matrix_method = "regret-matching";
    auto* matrix_cmd = app.add_subcommand("matrix", "Solve a 0/1 matrix game by fictitious play");
    matrix_cmd->add_option("--rows", matrix_rows, "Rows as 1,0;0,1");
    matrix_cmd->add_option("--file", matrix_file, "Matrix JSON file {rows: [[...]]}");
    matrix_cmd->add_option("--tol", matrix_tol, "Target gap between the value bounds");
    matrix_cmd->add_option("--max-iter", matrix_iter, "Iteration cap");
    matrix_cmd->add_option("--method", matrix_method, "regret-matching or fictitious")
        ->check(CLI::IsMember({"regret-matching", "fictitious"}));
    matrix_cmd->add_option("--format", format_text);

    // serve
    ServerOptions serve_opts;
    std::string serve_snapshots, serve_static;
    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP play service");
    serve_cmd->add_option("--addr", serve_opts.addr, "Listen address");
    serve_cmd->add_option("--port", serve_opts.port, "Listen port (0 = ephemeral)");
    serve_cmd->add_option("--allow-origin", serve_opts.allow_origin, "CORS origin for the web UI");
    serve_cmd->add_option("--static-dir", serve_static, "Serve static UI assets from this directory");
    serve_cmd->add_option("--snapshot-dir", serve_snapshots, "Append-only session snapshots");

    // play
    WinningSetOpts play_w;
    std::string play_strategy, play_payout = "100:140";
    std::optional<std::uint64_t> play_seed;
    std::uint64_t play_rounds = 0;
    auto* play_cmd = app.add_subcommand("play", "Play rounds against the dealer on the terminal");
    play_w.add(play_cmd);
    play_cmd->add_option("--strategy", play_strategy, "Dealer strategy JSON (default benford)");
    play_cmd->add_option("--payout", play_payout, "STAKE:RETURN in currency units");
    play_cmd->add_option("--seed", play_seed, "Dealer seed (printed when omitted)");
    play_cmd->add_option("--rounds", play_rounds, "Stop after this many rounds (0 = until EOF or q)");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        const Format format = parse_format(format_text);

        if (*value_cmd) {
            const auto w = value_w.get();
            const double v = game_value(w);
            if (format == Format::Json) emit(out, {{"value", v}, {"winning_set", to_json(w)}});
            else if (format == Format::Csv) out << "value\n" << full(v) << '\n';
            else out << fixed(v, value_precision) << '\n';
            return kExitOk;
        }

        if (*fair_cmd) {
            const auto w = fair_w.get();
            const double f = fair_payout(w);
            if (format == Format::Json) {
                emit(out, {{"fair_payout", f}, {"value", game_value(w)}, {"winning_set", to_json(w)}});
            } else if (format == Format::Csv) {
                out << "fair_payout,value\n" << full(f) << ',' << full(game_value(w)) << '\n';
            } else {
                out << fixed(f, fair_precision) << '\n';
            }
            return kExitOk;
        }

        if (*count_cmd) {
            const auto w = count_w.get();
            CountOptions opts;
            opts.threads = count_threads;
            const CountResult r = count_naive ? count_products(count_n, w, opts)
                                              : count_products_fast(count_n, w, opts);
            if (format == Format::Json) {
                json j = to_json(r);
                j["winning_set"] = to_json(w);
                j["method"] = count_naive ? "naive" : "fast";
                emit(out, j);
            } else if (format == Format::Csv) {
                out << "n,casino,player,ratio";
                for (int d = 1; d <= 9; ++d) out << ",digit" << d;
                out << '\n' << r.n << ',' << r.casino_wins << ',' << r.player_wins << ','
                    << fixed(r.casino_ratio(), 10);
                for (auto h : r.histogram) out << ',' << h;
                out << '\n';
            } else {
                out << r.casino_wins << ',' << r.player_wins << '\n';
                out << "ratio " << fixed(r.casino_ratio(), 10) << '\n';
                out << "digits";
                for (auto h : r.histogram) out << ' ' << h;
                out << '\n';
            }
            return kExitOk;
        }

        if (*limit_cmd) {
            const auto w = limit_w.get();
            const LimitResult r = uniform_limit_value(w);
            if (format == Format::Json) {
                emit(out, {{"probability", r.probability},
                           {"ratio", r.casino_ratio()},
                           {"error_estimate", r.error_estimate},
                           {"winning_set", to_json(w)}});
            } else if (format == Format::Csv) {
                out << "probability,ratio,error_estimate\n"
                    << full(r.probability) << ',' << full(r.casino_ratio()) << ','
                    << full(r.error_estimate) << '\n';
            } else {
                out << "probability " << fixed(r.probability, 10) << '\n'
                    << "ratio " << fixed(r.casino_ratio(), 6) << '\n';
            }
            return kExitOk;
        }

        if (*vy_cmd) {
            const auto w = vy_w.get();
            const auto v = v_y_set(w, vy_y);
            if (format == Format::Json) {
                emit(out, {{"y", vy_y}, {"v_y", to_json(v)}, {"benford_measure", benford_measure(v)}});
            } else if (format == Format::Csv) {
                out << "lo,hi\n";
                for (const auto& iv : v.parts()) out << full(iv.lo) << ',' << full(iv.hi) << '\n';
            } else {
                out << describe(v) << '\n' << "beta " << fixed(benford_measure(v), 10) << '\n';
            }
            return kExitOk;
        }

        if (*gap_cmd) {
            const auto w = gap_w.get();
            const double bound = beta_n_gap_bound(gap_n);
            if (gap_y) {
                const double g = beta_n_gap(gap_n, w, *gap_y);
                if (format == Format::Json) {
                    emit(out, {{"n", gap_n}, {"y", *gap_y}, {"gap", g}, {"bound", bound}});
                } else if (format == Format::Csv) {
                    out << "n,y,gap,bound\n" << gap_n << ',' << full(*gap_y) << ',' << full(g) << ','
                        << full(bound) << '\n';
                } else {
                    out << "gap " << full(g) << '\n' << "bound " << full(bound) << '\n';
                }
                return kExitOk;
            }
            if (gap_samples < 1) throw ValidationError("--samples must be positive");
            const std::uint64_t seed = resolve_seed(gap_seed);
            RngStream rng(seed, 0);
            double worst = 0.0, worst_y = 1.0;
            for (int k = 0; k < gap_samples; ++k) {
                const double y = 1.0 + 9.0 * rng.uniform();
                const double g = beta_n_gap(gap_n, w, y);
                if (g > worst) {
                    worst = g;
                    worst_y = y;
                }
            }
            if (format == Format::Json) {
                emit(out, {{"n", gap_n}, {"samples", gap_samples}, {"seed", seed},
                           {"max_gap", worst}, {"argmax_y", worst_y}, {"bound", bound}});
            } else if (format == Format::Csv) {
                out << "n,samples,seed,max_gap,argmax_y,bound\n"
                    << gap_n << ',' << gap_samples << ',' << seed << ',' << full(worst) << ','
                    << full(worst_y) << ',' << full(bound) << '\n';
            } else {
                out << "seed " << seed << '\n'
                    << "max_gap " << full(worst) << " at y=" << full(worst_y) << '\n'
                    << "bound " << full(bound) << '\n';
            }
            return kExitOk;
        }

        if (*sim_cmd) {
            const auto w = sim_w.get();
            const Strategy casino = strategy_arg(sim_casino, Strategy::benford());
            const Strategy player = strategy_arg(sim_player, Strategy::uniform_digits(3));
            const PayoutSchedule payout = PayoutSchedule::parse(sim_payout);
            const std::uint64_t seed = resolve_seed(sim_seed);
            if (sim_sessions == 0) throw ValidationError("--sessions must be positive");

            std::optional<double> expected;
            try {
                const double f = 1.0 - win_probability(casino, player, w);
                expected = expected_profit(payout, f) * static_cast<double>(sim_rounds);
            } catch (const std::exception&) {
            }

            if (sim_sessions == 1) {
                SimulateOptions opts;
                opts.keep_records = format == Format::Csv || !sim_trajectory.empty();
                const SessionStats s = simulate(sim_rounds, casino, player, w, payout, seed, opts);
                if (!sim_trajectory.empty()) {
                    std::ofstream f(sim_trajectory);
                    if (!f) throw ValidationError("cannot write '" + sim_trajectory + "'");
                    write_trajectory_csv(f, s);
                }
                if (format == Format::Json) {
                    json j = s.to_json();
                    j["seed"] = seed;
                    j["generator"] = RngStream::generator_name();
                    j["casino"] = casino.to_json();
                    j["player"] = player.to_json();
                    j["payout"] = payout.to_json();
                    if (expected) j["expected_profit"] = *expected;
                    emit(out, j);
                } else if (format == Format::Csv) {
                    write_trajectory_csv(out, s);
                } else {
                    out << "seed " << seed << '\n'
                        << "rounds " << s.rounds << '\n'
                        << "casino_wins " << s.casino_win_count << '\n'
                        << "casino_win_rate " << fixed(s.casino_win_rate(), 6) << '\n'
                        << "profit " << format_cents(s.profit) << '\n';
                    if (expected) out << "expected_profit " << fixed(*expected, 4) << '\n';
                }
                return kExitOk;
            }

            const auto profits = simulate_sessions(sim_sessions, sim_rounds, casino, player, w,
                                                   payout, seed, sim_threads);
            double mean = 0.0;
            for (auto p : profits) mean += static_cast<double>(p) / 100.0;
            mean /= static_cast<double>(profits.size());
            double var = 0.0;
            for (auto p : profits) var += std::pow(static_cast<double>(p) / 100.0 - mean, 2);
            const double sd = profits.size() > 1 ? std::sqrt(var / static_cast<double>(profits.size() - 1)) : 0.0;
            const double se = sd / std::sqrt(static_cast<double>(profits.size()));
            if (format == Format::Json) {
                json j{{"seed", seed},
                       {"generator", RngStream::generator_name()},
                       {"sessions", sim_sessions},
                       {"rounds", sim_rounds},
                       {"mean_profit", mean},
                       {"sd_profit", sd},
                       {"se_mean", se}};
                if (expected) j["expected_profit"] = *expected;
                emit(out, j);
            } else if (format == Format::Csv) {
                out << "session,profit\n";
                for (std::size_t s = 0; s < profits.size(); ++s) out << s << ',' << format_cents(profits[s]) << '\n';
            } else {
                out << "seed " << seed << '\n'
                    << "sessions " << sim_sessions << '\n'
                    << "mean_profit " << fixed(mean, 4) << '\n'
                    << "se_mean " << fixed(se, 4) << '\n';
                if (expected) out << "expected_profit " << fixed(*expected, 4) << '\n';
            }
            return kExitOk;
        }

        if (*group_cmd) {
            const int given = (group_cyclic > 0) + (group_dihedral > 0) + !group_table.empty();
            if (given != 1) throw ValidationError("give exactly one of --cyclic, --dihedral, --table");
            const FiniteGroup g = group_cyclic ? FiniteGroup::cyclic(group_cyclic)
                                  : group_dihedral ? FiniteGroup::dihedral(group_dihedral)
                                                   : FiniteGroup::from_json(read_json_file(group_table));
            const auto w = parse_index_list(group_w);
            const GroupValueReport rep = finite_group_value(g, w);
            std::optional<SolveReport> solved;
            if (group_solve) solved = fictitious_play(build_game_matrix(g, w));
            if (format == Format::Json) {
                json j = to_json(rep);
                j["order"] = g.order();
                j["abelian"] = g.is_abelian();
                if (solved) j["fictitious_play"] = to_json(*solved);
                emit(out, j);
            } else if (format == Format::Csv) {
                out << "order,winning,value,certified\n"
                    << g.order() << ',' << w.size() << ',' << full(rep.value) << ','
                    << (rep.certified ? "true" : "false") << '\n';
            } else {
                out << "value " << full(rep.value) << '\n'
                    << "certified " << (rep.certified ? "yes" : "no") << '\n';
                if (solved) {
                    out << "player_value_bounds " << full(solved->value_lower) << ' '
                        << full(solved->value_upper) << '\n';
                }
            }
            return kExitOk;
        }

        if (*matrix_cmd) {
            if (matrix_rows.empty() == matrix_file.empty()) {
                throw ValidationError("give exactly one of --rows, --file");
            }
            const GameMatrix m = matrix_rows.empty() ? GameMatrix::from_json(read_json_file(matrix_file))
                                                     : parse_matrix_rows(matrix_rows);
            if (!(matrix_tol > 0.0)) throw ValidationError("--tol must be positive");
            const SolveReport r = fictitious_play(
                m, {matrix_tol, matrix_iter,
                    matrix_method == "fictitious" ? SolveMethod::FictitiousPlay
                                                  : SolveMethod::RegretMatchingPlus});
            const auto c = m.balanced_line_sum();
            if (format == Format::Json) {
                json j = to_json(r);
                if (c) j["balanced_value"] = balanced_matrix_value(m);
                emit(out, j);
            } else if (format == Format::Csv) {
                out << "value_lower,value_upper,iterations,converged\n"
                    << full(r.value_lower) << ',' << full(r.value_upper) << ',' << r.iterations << ','
                    << (r.converged ? "true" : "false") << '\n';
            } else {
                out << "value_lower " << full(r.value_lower) << '\n'
                    << "value_upper " << full(r.value_upper) << '\n'
                    << "iterations " << r.iterations << (r.converged ? "" : " (not converged)") << '\n';
                if (c) out << "balanced_value " << full(balanced_matrix_value(m)) << '\n';
            }
            return kExitOk;
        }

        if (*serve_cmd) {
            SessionService::Options sopts;
            if (!serve_snapshots.empty()) sopts.snapshot_dir = serve_snapshots;
            if (!serve_static.empty()) serve_opts.static_dir = serve_static;
            SessionService service(sopts);
            const std::size_t recovered = service.recover();
            HttpServer server(service, serve_opts);
            const int port = server.bind();
            out << "listening on http://" << serve_opts.addr << ':' << port;
            if (recovered) out << " (" << recovered << " sessions recovered)";
            out << std::endl;
            server.listen();
            return kExitOk;
        }

        if (*play_cmd) {
            const auto w = play_w.get();
            const Strategy dealer = strategy_arg(play_strategy, Strategy::benford());
            const PayoutSchedule payout = PayoutSchedule::parse(play_payout);
            const std::uint64_t seed = resolve_seed(play_seed);
            SessionService service;
            const ApiResponse created = service.create(
                {{"payout", payout.to_json()}, {"dealer", dealer.to_json()},
                 {"winning_set", to_json(w)}, {"seed", seed}});
            if (created.status != 201) throw ValidationError(created.body.at("message").get<std::string>());
            const std::string id = created.body.at("session_id").get<std::string>();

            out << "seed " << seed << '\n'
                << "dealer " << dealer.type_name() << ", casino wins on " << describe(w)
                << ", payout " << format_cents(payout.stake) << ':' << format_cents(payout.win_return)
                << '\n'
                << "enter a positive number each round (integers are read as mantissas, 21 -> 2.1); q quits\n";

            std::uint64_t played = 0;
            while (play_rounds == 0 || played < play_rounds) {
                const ApiResponse opened = service.open_round(id);
                const std::string digest = opened.body.at("commitment_digest").get<std::string>();
                out << "round " << played + 1 << " commitment " << digest << '\n';
                std::optional<Decimal> number;
                std::string line;
                while (!number) {
                    out << "your number> " << std::flush;
                    if (!std::getline(in, line)) break;
                    line.erase(0, line.find_first_not_of(" \t\r"));
                    line.erase(line.find_last_not_of(" \t\r") + 1);
                    if (line == "q" || line == "quit") break;
                    try {
                        number = Decimal::parse_normalized(line);
                    } catch (const ValidationError& e) {
                        out << "invalid: " << e.what() << '\n';
                    }
                }
                if (!number) {
                    out << '\n';
                    break;
                }
                const ApiResponse r = service.play(id, {{"player_number", number->to_string()}});
                if (r.status != 200) throw ValidationError(r.body.at("message").get<std::string>());
                const auto& b = r.body;
                const Decimal dealer_number = Decimal::parse(b.at("dealer_number").get<std::string>());
                const bool verified =
                    commitment_digest(dealer_number, b.at("nonce").get<std::string>()) == digest;
                const bool casino_won = b.at("casino_won").get<bool>();
                out << "dealer " << b.at("dealer_number").get<std::string>() << " x you "
                    << number->to_string() << " -> " << b.at("product_mantissa").get<std::string>()
                    << " (leading digit " << b.at("leading_digit").get<int>() << "): "
                    << (casino_won ? "casino wins " : "you win +")
                    << format_cents(settle(payout, casino_won)) << ", bankroll "
                    << format_cents(static_cast<Cents>(std::llround(b.at("bankroll").get<double>() * 100.0)))
                    << ", commitment " << (verified ? "verified" : "MISMATCH") << '\n';
                ++played;
            }
            const auto st = service.stats(id).body;
            out << "rounds " << st.at("rounds").get<std::uint64_t>() << ", casino wins "
                << st.at("casino_win_count").get<std::uint64_t>() << ", profit "
                << format_cents(static_cast<Cents>(std::llround(st.at("profit").get<double>() * 100.0)))
                << '\n';
            return kExitOk;
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace multgame
