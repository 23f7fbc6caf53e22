// alloc-lab: asympt | simulate | compare | serve
#include <CLI11.hpp>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "alloclab/config.hpp"
#include "alloclab/report.hpp"
#include "alloclab/server.hpp"

namespace fs = std::filesystem;
using namespace alloclab;

namespace {

struct ScenarioFlags {
    std::vector<std::string> configs;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> entry_rate;
    std::optional<std::string> response_rate;
    std::optional<unsigned> threads;
    std::string out_dir;
    std::string format;

    void attach(CLI::App* cmd, bool with_output) {
        cmd->add_option("--config", configs, "scenario file (key=value or JSON); later files win");
        cmd->add_option("--set", sets, "override one key, e.g. --set sim.n=500");
        cmd->add_option("--seed", seed, "master seed (overrides sim.seed)");
        cmd->add_option("--delay-entry-rate", entry_rate, "entry rate lambda_0");
        cmd->add_option("--delay-response-rate", response_rate, "response rate, shared or one per arm (comma list)");
        cmd->add_option("--threads", threads, "worker threads");
        cmd->add_option("--format", format, "stdout format")->check(CLI::IsMember({"text", "json", "csv"}));
        if (with_output) cmd->add_option("--out-dir", out_dir, "directory for JSON and CSV reports");
    }

    KeyValues merged() const {
        KeyValues kv;
        for (const auto& path : configs)
            for (auto& [k, v] : load_config_file(path)) kv[k] = v;
        for (const auto& s : sets) apply_override(kv, s);
        if (seed) kv["sim.seed"] = std::to_string(*seed);
        if (entry_rate) kv["delay.entry_rate"] = *entry_rate;
        if (response_rate) kv["delay.response_rates"] = *response_rate;
        if (threads) kv["sim.threads"] = std::to_string(*threads);
        return kv;
    }
};

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + path.string());
    std::cerr << "wrote " << path.string() << '\n';
}

int cmd_asympt(const ScenarioFlags& f) {
    const Scenario sc = build_scenario(f.merged());
    const auto j = asympt_json(sc);
    if (f.format == "json") {
        std::cout << j.dump(2) << '\n';
    } else if (f.format == "csv") {
        std::cout << "design,scenario,K,v_1,sigma2,lower_bound,regime\n";
        const auto& a = j["asymptotic"];
        std::cout << j["design"].get<std::string>() << ',' << sc.name << ',' << sc.sim.p.size() << ','
                  << a["v"][0].get<double>() << ',';
        if (!a["sigma2"].is_null()) std::cout << a["sigma2"].get<double>();
        std::cout << ',';
        if (j.contains("lower_bound")) std::cout << j["lower_bound"].get<double>();
        std::cout << ',' << a["regime"].get<std::string>() << '\n';
    } else {
        std::cout << asympt_text(sc);
    }
    if (!f.out_dir.empty()) write_file(fs::path(f.out_dir) / (sc.name + ".asympt.json"), j.dump(2) + "\n");
    return 0;
}

int cmd_simulate(const ScenarioFlags& f) {
    const Scenario sc = build_scenario(f.merged());
    const StudyReport rep = run_study(sc.sim);
    const std::string json_text = report_json(sc, rep).dump(2) + "\n";
    const std::string csv_text = csv_header() + "\n" + csv_row(sc, rep) + "\n";
    if (f.format == "json") std::cout << json_text;
    else if (f.format == "csv") std::cout << csv_text;
    else std::cout << text_summary(sc, rep);
    if (!f.out_dir.empty()) {
        write_file(fs::path(f.out_dir) / (sc.name + ".json"), json_text);
        write_file(fs::path(f.out_dir) / (sc.name + ".csv"), csv_text);
    }
    return 0;
}

int cmd_compare(const ScenarioFlags& f, const std::vector<std::string>& designs) {
    std::vector<Scenario> scenarios;
    if (!designs.empty()) {
        const KeyValues base = f.merged();
        for (const auto& d : designs) {
            KeyValues kv = base;
            kv["design.kind"] = d;
            kv["scenario.name"] = d;
            scenarios.push_back(build_scenario(kv));
        }
    } else {
        // one scenario per config file, overrides applied to each
        for (const auto& path : f.configs) {
            ScenarioFlags single = f;
            single.configs = {path};
            scenarios.push_back(build_scenario(single.merged()));
        }
    }
    if (scenarios.size() < 2) throw ConfigError("compare", "need at least two scenarios");
    for (const auto& sc : scenarios) {
        if (sc.sim.p != scenarios[0].sim.p) throw ConfigError("arms.p", "scenarios must share the same arms");
        if (sc.sim.n != scenarios[0].sim.n) throw ConfigError("sim.n", "scenarios must share the same n");
    }
    std::vector<StudyReport> reports;
    for (const auto& sc : scenarios) reports.push_back(run_study(sc.sim));

    std::string csv_text = csv_header() + "\n";
    nlohmann::json all = nlohmann::json::array();
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        csv_text += csv_row(scenarios[i], reports[i]) + "\n";
        all.push_back(report_json(scenarios[i], reports[i]));
    }
    if (f.format == "json") std::cout << all.dump(2) << '\n';
    else if (f.format == "csv") std::cout << csv_text;
    else std::cout << compare_table(scenarios, reports);
    if (!f.out_dir.empty()) {
        write_file(fs::path(f.out_dir) / "compare.json", all.dump(2) + "\n");
        write_file(fs::path(f.out_dir) / "compare.csv", csv_text);
    }
    return 0;
}

ApiServer* g_server = nullptr;

int cmd_serve(const std::string& host, int port, const std::string& data_dir) {
    SessionStore store(data_dir.empty() ? std::nullopt : std::optional<fs::path>(data_dir));
    ApiServer server(store);
    const int bound = server.bind(host, port);
    if (bound < 0) {
        std::cerr << "error: cannot bind " << host << ':' << port << '\n';
        return 1;
    }
    g_server = &server;
    std::signal(SIGINT, [](int) {
        if (g_server) g_server->stop();
    });
    std::signal(SIGTERM, [](int) {
        if (g_server) g_server->stop();
    });
    std::cerr << "listening on http://" << host << ':' << bound << " (" << store.ids().size()
              << " sessions restored)\n";
    server.serve();
    g_server = nullptr;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"response-adaptive allocation lab"};
    app.require_subcommand(1);

    ScenarioFlags asympt_flags, sim_flags, cmp_flags;
    auto* asympt = app.add_subcommand("asympt", "limiting proportions, variances and the lower bound");
    asympt_flags.attach(asympt, true);
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo study of one scenario");
    sim_flags.attach(simulate, true);
    auto* compare = app.add_subcommand("compare", "side-by-side study of several designs");
    cmp_flags.attach(compare, true);
    std::vector<std::string> designs;
    compare->add_option("--designs", designs, "design kinds sharing the base scenario")->delimiter(',');

    auto* serve = app.add_subcommand("serve", "local session API");
    std::string host = "127.0.0.1", data_dir = "sessions";
    int port = 8080;
    serve->add_option("--host", host, "bind address");
    serve->add_option("--port", port, "port (0 picks a free one)");
    serve->add_option("--data-dir", data_dir, "session logs");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*asympt) return cmd_asympt(asympt_flags);
        if (*simulate) return cmd_simulate(sim_flags);
        if (*compare) return cmd_compare(cmp_flags, designs);
        if (*serve) return cmd_serve(host, port, data_dir);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
