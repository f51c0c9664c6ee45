#include "damctl/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>

#include "damctl/checks.hpp"
#include "damctl/config.hpp"
#include "damctl/control.hpp"
#include "damctl/emit.hpp"
#include "damctl/exact.hpp"
#include "damctl/sim.hpp"

namespace damctl {

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct Options {
    // model
    std::optional<double> lambda;
    std::optional<std::string> b1, b2;
    std::optional<int> L;
    std::optional<double> j1, j2;
    std::optional<std::string> cost;
    std::optional<double> rho2, rho12;
    // command specific
    std::optional<double> C;
    std::optional<std::string> c_grid;
    std::optional<std::string> j2_grid;
    double cmax = 50.0;
    double tol = 1e-4;
    std::optional<double> horizon;
    double warmup = 0.0;
    std::uint64_t seed = 1;
    int replications = 1;
    bool renormalize = false;
    bool paper_literal = false;
    bool exclusive_count = false;
    std::string scenario = "paper";
    // output
    std::string format;
    std::optional<std::string> out_path;
};

template <typename T>
T required(const std::optional<T>& v, const std::string& flag) {
    if (!v) throw ConfigError("missing required option --" + flag);
    return *v;
}

DamModelParams build_model(const Options& o) {
    return DamModelParams(required(o.lambda, "lambda"),
                          parse_dist_spec(required(o.b1, "b1")),
                          parse_dist_spec(required(o.b2, "b2")), required(o.L, "L"),
                          required(o.j1, "j1"), required(o.j2, "j2"));
}

RegimeParams build_regime(const Options& o) {
    double rho2;
    if (o.rho2) {
        rho2 = *o.rho2;
    } else if (o.b2 && o.lambda) {
        rho2 = *o.lambda * parse_dist_spec(*o.b2).mean();
    } else {
        throw ConfigError("need --rho2, or --b2 with --lambda to derive it");
    }
    double rho12;
    if (o.rho12) {
        rho12 = *o.rho12;
    } else if (o.b1) {
        rho12 = rho12_at_critical(parse_dist_spec(*o.b1));
    } else {
        throw ConfigError("need --rho12, or --b1 to derive it at rho1 = 1");
    }
    return RegimeParams(required(o.j1, "j1"), o.j2.value_or(0.0), rho2, rho12,
                        parse_cost_spec(required(o.cost, "cost")));
}

json model_echo(const Options& o) {
    json j;
    if (o.lambda) j["lambda"] = *o.lambda;
    if (o.b1) j["b1"] = *o.b1;
    if (o.b2) j["b2"] = *o.b2;
    if (o.L) j["L"] = *o.L;
    if (o.j1) j["j1"] = *o.j1;
    if (o.j2) j["j2"] = *o.j2;
    if (o.cost) j["cost"] = *o.cost;
    if (o.rho2) j["rho2"] = *o.rho2;
    if (o.rho12) j["rho12"] = *o.rho12;
    return j;
}

void emit_doc(const json& doc, const std::string& csv, const Options& o,
              std::ostream& out, const std::string& default_format) {
    const std::string& fmt = o.format.empty() ? default_format : o.format;
    if (fmt == "csv")
        write_output(csv, o.out_path, out);
    else
        write_output(doc.dump(2) + "\n", o.out_path, out);
}

int cmd_exact(const Options& o, std::ostream& out) {
    DamModelParams model = build_model(o);
    CostModel costs = parse_cost_spec(required(o.cost, "cost"));
    StationaryResult st = stationary(model);
    double objective = objective_exact(model, costs);
    if (o.renormalize) st = st.renormalized();

    json doc{{"schema_version", kSchemaVersion},
             {"command", "exact"},
             {"params", model_echo(o)},
             {"renormalized", o.renormalize},
             {"p1", st.p1},
             {"p2", st.p2},
             {"q", st.q},
             {"defect", st.defect},
             {"objective", objective}};
    std::vector<std::vector<std::string>> rows{{"p1", format_double(st.p1)},
                                               {"p2", format_double(st.p2)}};
    for (std::size_t i = 0; i < st.q.size(); ++i)
        rows.push_back({"q_" + std::to_string(i + 1), format_double(st.q[i])});
    rows.push_back({"defect", format_double(st.defect)});
    rows.push_back({"objective", format_double(objective)});
    emit_doc(doc, to_csv({"name", "value"}, rows), o, out, "json");
    return kExitOk;
}

int cmd_asympt(const Options& o, std::ostream& out) {
    RegimeParams p = build_regime(o);
    if (o.C && o.c_grid) throw ConfigError("--C and --grid are mutually exclusive");
    if (!o.C && !o.c_grid) throw ConfigError("need --C or --grid");
    double balanced = balanced_limit(p);

    if (o.C) {
        double C = *o.C;
        json doc{{"schema_version", kSchemaVersion}, {"command", "asympt"},
                 {"params", model_echo(o)},         {"C", C},
                 {"balanced", balanced},            {"j_upper", j_upper(p, C)},
                 {"j_lower", j_lower(p, C)}};
        std::vector<std::vector<std::string>> rows{
            {"balanced", format_double(balanced)},
            {"j_upper", format_double(j_upper(p, C))},
            {"j_lower", format_double(j_lower(p, C))}};
        if (o.paper_literal) {
            doc["j_lower_paper_literal"] = j_lower_paper_literal(p, C);
            rows.push_back({"j_lower_paper_literal",
                            format_double(j_lower_paper_literal(p, C))});
        }
        emit_doc(doc, to_csv({"name", "value"}, rows), o, out, "csv");
        return kExitOk;
    }

    std::vector<double> grid = parse_value_grid(*o.c_grid);
    std::vector<std::string> header{"C", "j_upper", "j_lower"};
    if (o.paper_literal) header.push_back("j_lower_paper_literal");
    std::vector<std::vector<std::string>> rows;
    json jrows = json::array();
    for (double C : grid) {
        double ju = j_upper(p, C);
        double jl = j_lower(p, C);
        json r{{"C", C}, {"j_upper", ju}, {"j_lower", jl}};
        std::vector<std::string> row{format_double(C), format_double(ju),
                                     format_double(jl)};
        if (o.paper_literal) {
            double lit = C > 0 ? j_lower_paper_literal(p, C)
                               : std::numeric_limits<double>::infinity();
            r["j_lower_paper_literal"] = lit;
            row.push_back(format_double(lit));
        }
        jrows.push_back(r);
        rows.push_back(row);
    }
    json doc{{"schema_version", kSchemaVersion},
             {"command", "asympt"},
             {"params", model_echo(o)},
             {"balanced", balanced},
             {"rows", jrows}};
    emit_doc(doc, to_csv(header, rows), o, out, "csv");
    return kExitOk;
}

json minimum_json(const ScalarMinimum& m) {
    return json{{"C", m.argmin}, {"value", m.value}};
}

int cmd_solve(const Options& o, std::ostream& out) {
    RegimeParams p = build_regime(o);
    if (!o.j2) throw ConfigError("missing required option --j2");
    ControlSolution sol = solve(p, o.cmax, o.tol);
    json doc{{"schema_version", kSchemaVersion},
             {"command", "solve"},
             {"params", model_echo(o)},
             {"regime", to_string(sol.regime)},
             {"C", sol.C},
             {"objective", sol.objective},
             {"upper_min", minimum_json(sol.upper_min)},
             {"lower_min", minimum_json(sol.lower_min)},
             {"balanced_value", sol.balanced_value}};
    std::vector<std::vector<std::string>> rows{
        {"regime", to_string(sol.regime)},
        {"C", format_double(sol.C)},
        {"objective", format_double(sol.objective)},
        {"upper_C", format_double(sol.upper_min.argmin)},
        {"upper_value", format_double(sol.upper_min.value)},
        {"lower_C", format_double(sol.lower_min.argmin)},
        {"lower_value", format_double(sol.lower_min.value)},
        {"balanced_value", format_double(sol.balanced_value)}};
    emit_doc(doc, to_csv({"name", "value"}, rows), o, out, "json");
    return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
    RegimeParams p = build_regime(o);
    std::vector<double> grid = parse_value_grid(required(o.j2_grid, "j2"));
    std::vector<SweepRow> sweep = sweep_j2(p, grid, o.cmax, o.tol);

    std::vector<std::vector<std::string>> rows;
    json jrows = json::array();
    for (const SweepRow& r : sweep) {
        rows.push_back({format_double(r.j2), to_string(r.regime), format_double(r.C),
                        format_double(r.objective)});
        jrows.push_back(json{{"j2", r.j2},
                             {"regime", to_string(r.regime)},
                             {"C", r.C},
                             {"objective", r.objective}});
    }
    json doc{{"schema_version", kSchemaVersion},
             {"command", "sweep"},
             {"params", model_echo(o)},
             {"rows", jrows}};
    emit_doc(doc, to_csv({"j2", "regime", "C", "objective"}, rows), o, out, "csv");
    return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
    DamModelParams model = build_model(o);
    CostModel costs = parse_cost_spec(required(o.cost, "cost"));
    SimConfig cfg{model,  costs,          required(o.horizon, "horizon"), o.warmup,
                  o.seed, o.replications, o.exclusive_count};
    SimEstimate est = simulate(cfg);

    auto ej = [](const Estimate& e) { return json{{"value", e.value}, {"se", e.se}}; };
    json jq = json::array();
    for (const Estimate& e : est.q) jq.push_back(ej(e));
    json doc{{"schema_version", kSchemaVersion},
             {"command", "simulate"},
             {"params", model_echo(o)},
             {"seed", cfg.seed},
             {"replications", cfg.replications},
             {"p1", ej(est.p1)},
             {"p2", ej(est.p2)},
             {"q", jq},
             {"objective", ej(est.objective)}};
    std::vector<std::vector<std::string>> rows{
        {"p1", format_double(est.p1.value), format_double(est.p1.se)},
        {"p2", format_double(est.p2.value), format_double(est.p2.se)}};
    for (std::size_t i = 0; i < est.q.size(); ++i)
        rows.push_back({"q_" + std::to_string(i + 1), format_double(est.q[i].value),
                        format_double(est.q[i].se)});
    rows.push_back({"objective", format_double(est.objective.value),
                    format_double(est.objective.se)});
    emit_doc(doc, to_csv({"name", "value", "se"}, rows), o, out, "json");
    return kExitOk;
}

int cmd_validate(const Options& o, std::ostream& out) {
    std::vector<CheckResult> results = acceptance_checks(o.scenario);
    std::ostringstream table;
    for (const CheckResult& r : results) {
        table << (r.pass ? "PASS" : "FAIL") << "  " << r.id << "  " << r.name << "  "
              << r.detail << "\n";
    }
    bool ok = all_passed(results);
    table << (ok ? "all checks passed" : "validation FAILED") << " (scenario "
          << o.scenario << ")\n";
    write_output(table.str(), o.out_path, out);
    return ok ? kExitOk : kExitNumeric;
}

// Turns a key=value config file into flag tokens that are inserted ahead of
// the explicit command line, so explicit flags win.
std::vector<std::string> config_tokens(const std::string& path) {
    static const std::vector<std::string> kFlagsOnly = {"renormalize", "paper-literal",
                                                        "exclusive-count"};
    std::vector<std::string> tokens;
    for (const auto& [key, value] : load_key_values(path)) {
        bool is_flag = std::find(kFlagsOnly.begin(), kFlagsOnly.end(), key) !=
                       kFlagsOnly.end();
        if (is_flag) {
            if (value == "true" || value == "1" || value == "yes")
                tokens.push_back("--" + key);
            else if (value != "false" && value != "0" && value != "no")
                throw ConfigError("boolean key '" + key + "' has value '" + value + "'");
        } else {
            tokens.push_back("--" + key);
            tokens.push_back(value);
        }
    }
    return tokens;
}

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::vector<std::string> rest;
    std::optional<std::string> config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw ConfigError("--config needs a path");
            config_path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (!config_path || rest.empty()) return rest;
    std::vector<std::string> merged;
    merged.push_back(rest.front()); // subcommand name
    auto tokens = config_tokens(*config_path);
    merged.insert(merged.end(), tokens.begin(), tokens.end());
    merged.insert(merged.end(), rest.begin() + 1, rest.end());
    return merged;
}

void add_model_options(CLI::App* cmd, Options& o, bool j2_as_grid = false) {
    cmd->add_option("--lambda", o.lambda, "arrival rate of the inflow");
    cmd->add_option("--b1", o.b1, "normal-state service spec, e.g. exp:1.0");
    cmd->add_option("--b2", o.b2, "above-band service spec, e.g. exp:2.0");
    cmd->add_option("--L", o.L, "number of in-band levels");
    cmd->add_option("--j1", o.j1, "lower-crossing penalty coefficient");
    if (j2_as_grid)
        cmd->add_option("--j2", o.j2_grid, "j2 grid start:stop:step or comma list");
    else
        cmd->add_option("--j2", o.j2, "upper-crossing penalty coefficient");
    cmd->add_option("--cost", o.cost,
                    "cost spec: constant:c | linear:top,bottom | table:file,rule");
}

void add_output_options(CLI::App* cmd, Options& o, const std::string& default_format) {
    cmd->add_option("--format", o.format, "output format (default " + default_format + ")")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", o.out_path, "output path (default stdout)");
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"dam output-rate control: exact, asymptotic and simulated engines"};
    app.require_subcommand(1);
    // config-file tokens are inserted ahead of explicit flags; last one wins
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    CLI::App* exact = app.add_subcommand("exact", "finite-L stationary law and objective");
    add_model_options(exact, o);
    exact->add_flag("--renormalize", o.renormalize,
                    "divide (p1, p2, q) by their sum instead of reporting the defect");
    add_output_options(exact, o, "json");

    CLI::App* asympt = app.add_subcommand("asympt", "heavy-traffic limit functionals");
    add_model_options(asympt, o);
    asympt->add_option("--rho2", o.rho2, "above-band traffic intensity");
    asympt->add_option("--rho12", o.rho12, "limit second scaled moment of b1");
    asympt->add_option("--C", o.C, "evaluate at a single control value");
    asympt->add_option("--grid", o.c_grid, "plot grid start:stop:step");
    asympt->add_flag("--paper-literal", o.paper_literal,
                     "also evaluate the lower functional in its printed form");
    add_output_options(asympt, o, "csv");

    CLI::App* solve_cmd = app.add_subcommand("solve", "optimal regime and C");
    add_model_options(solve_cmd, o);
    solve_cmd->add_option("--rho2", o.rho2, "above-band traffic intensity");
    solve_cmd->add_option("--rho12", o.rho12, "limit second scaled moment of b1");
    solve_cmd->add_option("--cmax", o.cmax, "search interval upper end");
    solve_cmd->add_option("--tol", o.tol, "boundary/minimizer tolerance");
    add_output_options(solve_cmd, o, "json");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "solve over a j2 grid");
    add_model_options(sweep_cmd, o, /*j2_as_grid=*/true);
    sweep_cmd->add_option("--rho2", o.rho2, "above-band traffic intensity");
    sweep_cmd->add_option("--rho12", o.rho12, "limit second scaled moment of b1");
    sweep_cmd->add_option("--cmax", o.cmax, "search interval upper end");
    sweep_cmd->add_option("--tol", o.tol, "boundary/minimizer tolerance");
    add_output_options(sweep_cmd, o, "csv");

    CLI::App* sim_cmd = app.add_subcommand("simulate", "discrete-event estimate");
    add_model_options(sim_cmd, o);
    sim_cmd->add_option("--horizon", o.horizon, "simulated time per replication");
    sim_cmd->add_option("--warmup", o.warmup, "discarded initial time");
    sim_cmd->add_option("--seed", o.seed, "master RNG seed");
    sim_cmd->add_option("--replications", o.replications, "independent replications");
    sim_cmd->add_flag("--exclusive-count", o.exclusive_count,
                      "exclude the unit entering service from the level comparison");
    add_output_options(sim_cmd, o, "json");

    CLI::App* validate_cmd =
        app.add_subcommand("validate", "cross-engine consistency suite");
    validate_cmd->add_option("--scenario", o.scenario, "paper|quick");
    validate_cmd->add_option("--out", o.out_path, "output path (default stdout)");

    try {
        std::vector<std::string> expanded = expand_config(args);
        // CLI11 consumes tokens in reverse
        std::vector<std::string> rev(expanded.rbegin(), expanded.rend());
        app.parse(rev);
        if (exact->parsed()) return cmd_exact(o, out);
        if (asympt->parsed()) return cmd_asympt(o, out);
        if (solve_cmd->parsed()) return cmd_solve(o, out);
        if (sweep_cmd->parsed()) return cmd_sweep(o, out);
        if (sim_cmd->parsed()) return cmd_simulate(o, out);
        if (validate_cmd->parsed()) return cmd_validate(o, out);
        err << "no subcommand selected\n";
        return kExitConfig;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitConfig;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitConfig;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        err << "io error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        err << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}

} // namespace damctl
