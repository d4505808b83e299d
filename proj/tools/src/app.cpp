#include <filesystem>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "alfven_cli/commands.hpp"

namespace alfven::cli {

using nlohmann::ordered_json;

namespace {

ordered_json table_json(const csv::Table& t) {
    ordered_json j;
    for (std::size_t c = 0; c < t.columns().size(); ++c) {
        ordered_json col = ordered_json::array();
        for (std::size_t i = 0; i < t.rows(); ++i) col.push_back(t.at(i, c));
        j[t.columns()[c]] = std::move(col);
    }
    return j;
}

ordered_json document(const CommandResult& r) {
    ordered_json j;
    j["command"] = r.command;
    j["exit_code"] = r.exit_code;
    j["summary"] = r.summary;
    ordered_json tables = ordered_json::object();
    for (const auto& [name, t] : r.tables) tables[name] = table_json(t);
    j["tables"] = std::move(tables);
    return j;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw UsageError("cannot write " + p.string());
    f << content;
    if (!f) throw UsageError("write failed for " + p.string());
}

}  // namespace

void emit(const CommandResult& r, const RunConfig& cfg, std::ostream& out) {
    const Emit fmt = cfg.emit.value_or(r.command == "check" ? Emit::json : Emit::csv);
    if (!cfg.out.empty()) {
        const std::filesystem::path dir(cfg.out);
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw UsageError("cannot create output directory " + cfg.out + ": " + ec.message());
        if (fmt == Emit::csv) {
            for (const auto& [name, t] : r.tables) write_file(dir / (name + ".csv"), t.str());
            write_file(dir / "summary.json", r.summary.dump(2) + "\n");
        } else {
            write_file(dir / (r.command + ".json"), document(r).dump(2) + "\n");
        }
        if (!r.text.empty()) out << r.text;
        return;
    }
    if (!r.text.empty()) {
        out << r.text;
    } else if (fmt == Emit::csv && !r.tables.empty()) {
        r.tables.front().second.write(out);
    } else {
        out << document(r).dump(2) << "\n";
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Alfven mode spectral and evolution toolkit"};
    app.require_subcommand(1);

    std::string config_path, scan, out_dir, emit_fmt;
    int alpha = 0, jobs = 0;
    std::size_t n = 0;
    double tol = 0, t_final = 0, eps = 0;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"check", "validate the profile assumptions and report the extension case"},
        {"homog", "homogeneous solutions phi_+ and phi_- at one spectral point"},
        {"wronskian", "Wronskian D along a line of spectral parameters"},
        {"theta", "solution of the inhomogeneous problem at one spectral point"},
        {"island", "limiting magnetic island profiles"},
        {"evolve", "time evolution of one mode against the island prediction"},
        {"compare", "evolution error table with pass/fail thresholds"},
    };
    std::vector<CLI::App*> subs;
    for (const auto& [name, help] : commands) {
        auto* s = app.add_subcommand(name, help);
        s->add_option("--config", config_path, "JSON run configuration")->required();
        s->add_option("--alpha", alpha, "wave number");
        s->add_option("--n", n, "grid size");
        s->add_option("--tol", tol, "iteration tolerance");
        s->add_option("--t-final", t_final, "final time");
        s->add_option("--scan", scan, "real-part scan lo:hi:steps");
        s->add_option("--eps", eps, "imaginary part of the spectral parameter");
        s->add_option("--jobs", jobs, "worker threads for scans");
        s->add_option("--out", out_dir, "output directory");
        s->add_option("--emit", emit_fmt, "output format")->check(CLI::IsMember({"json", "csv"}));
        subs.push_back(s);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    std::string command;
    for (auto* s : subs)
        if (s->parsed()) command = s->get_name();
    auto given = [&](const char* flag) { return app.get_subcommand(command)->count(flag) > 0; };

    try {
        RunConfig cfg = load_config(config_path);
        if (given("--alpha")) cfg.alpha = alpha;
        if (given("--n")) cfg.n = n;
        if (given("--tol")) cfg.tol = tol;
        if (given("--t-final")) cfg.t_final = t_final;
        if (given("--scan")) cfg.scan = parse_scan(scan);
        if (given("--eps")) cfg.eps = eps;
        if (given("--jobs")) cfg.jobs = jobs;
        if (given("--out")) cfg.out = out_dir;
        if (given("--emit")) cfg.emit = emit_fmt == "json" ? Emit::json : Emit::csv;
        if (cfg.jobs < 1) throw UsageError("jobs must be >= 1");

        const CommandResult r = run_command(command, cfg);
        emit(r, cfg, out);
        if (!r.message.empty()) err << command << ": " << r.message << "\n";
        return r.exit_code;
    } catch (const UsageError& e) {
        err << command << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << command << ": " << e.what() << "\n";
        return kExitDomain;
    }
}

}  // namespace alfven::cli
