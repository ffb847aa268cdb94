#include "fipsim/engine.hpp"
#include "fipsim/scenario.hpp"
#include "fipsim/verifier.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw fipsim::ConstructionError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spill(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw fipsim::ConstructionError("cannot write '" + path + "'");
    out << text;
}

int cmd_run(const std::string& scenario_path, std::optional<fipsim::Nat> stages_override,
            const std::string& trace_path, const std::string& dump_path, bool quiet) {
    fipsim::Scenario sc = fipsim::Scenario::parse(slurp(scenario_path));
    if (stages_override) sc.stages = *stages_override;
    fipsim::Engine engine(sc);
    fipsim::RunResult result;
    try {
        result = engine.run();
    } catch (const fipsim::ConstructionError&) {
        // hard failure: flush whatever trace exists, then report
        if (!trace_path.empty()) spill(trace_path, engine.trace_text());
        throw;
    }
    if (!trace_path.empty()) spill(trace_path, result.trace_text);
    if (!dump_path.empty()) spill(dump_path, fipsim::write_state_text(result.snapshot));
    if (!quiet) {
        std::cout << "stages=" << result.snapshot.stages_run
                  << " |A|=" << result.snapshot.a_entry_stage.size()
                  << " events=" << result.snapshot.event_count
                  << " satisfied=" << result.satisfied_count << "\n";
    }
    return kExitOk;
}

int cmd_verify(const std::string& trace_path, std::vector<std::string> checks,
               const std::string& report_path, bool quiet) {
    std::string text = slurp(trace_path);
    fipsim::TraceFile tf = fipsim::parse_trace_text(text);
    if (tf.scenario_text.empty()) {
        throw fipsim::ConstructionError("trace file carries no scenario header");
    }
    fipsim::Scenario sc = fipsim::Scenario::parse(tf.scenario_text);
    fipsim::RunRecord record = fipsim::make_record(sc, std::move(text));
    if (checks.empty()) checks = {"all"};
    auto known = fipsim::check_names();
    for (const auto& name : checks) {
        if (name == "all") continue;
        if (std::find(known.begin(), known.end(), name) == known.end()) {
            std::cerr << "unknown check '" << name << "'; available:";
            for (const auto& k : known) std::cerr << " " << k;
            std::cerr << " all\n";
            return kExitUsage;
        }
    }
    std::vector<fipsim::Verdict> verdicts = fipsim::run_checks(record, checks);
    std::string report = "# fipsim-report 1\n";
    bool failed = false;
    for (const auto& v : verdicts) {
        std::string one = v.check + ": " + std::string(fipsim::result_name(v.result));
        if (!v.detail.empty()) one += " -- " + v.detail;
        for (const auto& [k, val] : v.stats) one += " [" + k + "=" + std::to_string(val) + "]";
        if (!quiet) std::cout << one << "\n";
        report += one + "\n";
        if (!v.ok()) failed = true;
    }
    if (!report_path.empty()) spill(report_path, report);
    return failed ? kExitCheckFailed : kExitOk;
}

int cmd_dump(const std::string& state_path, std::optional<fipsim::Nat> m_filter) {
    std::string text = slurp(state_path);
    std::istringstream in(text);
    std::string line;
    bool m_seen = false;
    std::string a_block, table_block, head_block;
    while (std::getline(in, line)) {
        if (line.rfind("a ", 0) == 0) {
            a_block += line + "\n";
        } else if (line.rfind("table ", 0) == 0) {
            std::istringstream ls(line);
            std::string tag;
            fipsim::Nat m = 0;
            ls >> tag >> m;
            if (m_filter && m != *m_filter) continue;
            m_seen = true;
            table_block += line + "\n";
        } else if (line.rfind("stage ", 0) == 0 || line.rfind("high-water ", 0) == 0) {
            head_block += line + "\n";
        }
    }
    if (m_filter && !m_seen) {
        std::cerr << "no coding-map table for m=" << *m_filter << "\n";
        return kExitUsage;
    }
    std::cout << head_block;
    std::cout << "A (element entry-stage):\n" << (a_block.empty() ? "(empty)\n" : a_block);
    std::cout << "tables (m z theta birth author lambda birth author):\n" << table_block;
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-injury priority construction simulator"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run a scenario and write its trace");
    std::string scenario_path, trace_path, dump_path, report_path, state_path;
    std::optional<fipsim::Nat> stages_override, m_filter;
    bool quiet = false;
    run->add_option("--scenario", scenario_path, "scenario file")->required();
    run->add_option("--stages", stages_override, "override the stage budget");
    run->add_option("--trace", trace_path, "write the event trace here");
    run->add_option("--dump", dump_path, "write the final-state dump here");
    run->add_flag("--quiet", quiet, "suppress the summary line");

    auto* verify = app.add_subcommand("verify", "replay a trace and run verifier checks");
    std::vector<std::string> checks;
    verify->add_option("--trace", trace_path, "trace file to verify")->required();
    verify->add_option("--check", checks, "check name (repeatable) or 'all'");
    verify->add_option("--report", report_path, "write the machine-readable report here");
    verify->add_flag("--quiet", quiet, "suppress per-check lines");

    auto* dump = app.add_subcommand("dump", "print tables from a state dump");
    dump->add_option("--state", state_path, "state dump file")->required();
    dump->add_option("--m", m_filter, "restrict to one parameter m");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run->parsed()) {
            return cmd_run(scenario_path, stages_override, trace_path, dump_path, quiet);
        }
        if (verify->parsed()) {
            return cmd_verify(trace_path, checks, report_path, quiet);
        }
        return cmd_dump(state_path, m_filter);
    } catch (const fipsim::ConstructionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
