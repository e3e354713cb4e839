#include "bdris/errors.hpp"
#include "bdris/rng.hpp"
#include "bdris/selfcheck.hpp"
#include "bdris/sim.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

namespace {

using namespace bdris;

std::string db_string(double linear) {
    if (linear <= 0.0)
        return "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", 10.0 * std::log10(linear));
    return buf;
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides,
            const std::string& out_dir) {
    const RunSpec spec = load_run_spec(config_path, overrides);
    const SystemConfig& cfg = spec.config;
    const ArchSpec arch = parse_architecture(spec.architecture);

    const ChannelSet ch = sample_channels(cfg, spec.trial);
    auto init_rng = make_stream(cfg.seed, spec.trial, StreamTag::init);
    const ComplexMatrix init = random_symmetric_unitary(cfg.ris_elements(), init_rng);

    SingleRun run = run_single(cfg, arch, ch, init, true);
    run.record.axis = "-";
    run.record.value_token = "-";
    run.trace_id = run.record.architecture + "-seed" + std::to_string(cfg.seed) + "-t" +
                   std::to_string(spec.trial);

    const std::filesystem::path out(out_dir);
    write_text_file((out / "records.jsonl").string(), record_jsonl(run.record));
    write_text_file((out / "records.csv").string(),
                    record_csv_header() + record_csv_row(run.record));
    std::string trace_path = "-";
    if (!run.trace.empty()) {
        trace_path = (out / ("trace-" + run.trace_id + ".csv")).string();
        write_text_file(trace_path, trace_csv(run.trace));
    }

    const ResultRecord& r = run.record;
    std::printf("architecture  %s\n", r.architecture.c_str());
    std::printf("trial         %llu  seed %llu  L %d  beta %s\n",
                static_cast<unsigned long long>(r.trial_index),
                static_cast<unsigned long long>(r.seed), r.l_elements,
                format_double(r.beta).c_str());
    std::printf("snr_c         %s  (%s dB)\n", format_double(r.snr_c).c_str(),
                db_string(r.snr_c).c_str());
    std::printf("snr_r         %s  (%s dB)\n", format_double(r.snr_r).c_str(),
                db_string(r.snr_r).c_str());
    std::printf("snr_t         %s  (%s dB)\n", format_double(r.snr_t).c_str(),
                db_string(r.snr_t).c_str());
    std::printf("converged     %s  (%d outer iterations)\n", r.converged ? "true" : "false",
                r.outer_iterations);
    std::printf("unitarity     %s\n", format_double(r.unitarity_residual).c_str());
    std::printf("wrote         %s %s %s\n", (out / "records.jsonl").string().c_str(),
                (out / "records.csv").string().c_str(), trace_path.c_str());
    return 0;
}

int cmd_sweep(const std::string& sweep_path) {
    const SweepSpec spec = load_sweep_spec(sweep_path);
    const SweepOutput out = run_sweep(spec);

    const std::filesystem::path dir(spec.output_dir);
    std::string results = aggregate_csv_header();
    for (const std::string& row : out.aggregate_lines)
        results += row;
    write_text_file((dir / "results.csv").string(), results);

    std::string records_csv = record_csv_header();
    std::string records_jsonl;
    for (const SingleRun& run : out.runs) {
        records_csv += record_csv_row(run.record);
        records_jsonl += record_jsonl(run.record);
    }
    write_text_file((dir / "records.csv").string(), records_csv);
    write_text_file((dir / "records.jsonl").string(), records_jsonl);

    for (const SingleRun& run : out.runs)
        if (!run.trace.empty())
            write_text_file((dir / ("trace-" + run.trace_id + ".csv")).string(),
                            trace_csv(run.trace));

    std::printf("sweep axis    %s  (%zu values x %d trials)\n", spec.axis.c_str(),
                spec.value_tokens.size(), spec.trials);
    std::printf("records       %zu\n", out.runs.size());
    std::printf("wrote         %s/{results.csv,records.csv,records.jsonl,trace-*.csv}\n",
                spec.output_dir.c_str());
    return 0;
}

int cmd_check(const std::string& inject_fault) {
    const std::vector<CheckResult> results = run_selfchecks(inject_fault);
    bool all_pass = true;
    for (const CheckResult& c : results) {
        std::printf("%s  %-22s  residual %-10.3g  %s\n", c.pass ? "PASS" : "FAIL",
                    c.name.c_str(), c.residual, c.detail.c_str());
        all_pass = all_pass && c.pass;
    }
    if (!all_pass) {
        std::printf("check: FAILED\n");
        return 1;
    }
    std::printf("check: OK\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reconfigurable-surface ISAC designer: weighted radar+communication "
                 "SNR maximization over symmetric unitary scattering matrices"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", sweep_path, inject_fault;
    std::vector<std::string> overrides;

    CLI::App* run = app.add_subcommand("run", "Design one surface on one channel realization");
    run->add_option("config", config_path, "Scenario file (JSON)")->required();
    run->add_option("--set", overrides, "Override a field, e.g. --set objective.beta=0.7");
    run->add_option("--out", out_dir, "Output directory (default: out)");

    CLI::App* sweep = app.add_subcommand("sweep", "Run a sweep specification");
    sweep->add_option("spec", sweep_path, "Sweep file (JSON)")->required();

    CLI::App* check = app.add_subcommand("check", "Run internal consistency checks");
    check->add_option("--inject-fault", inject_fault,
                      "Deliberately corrupt one computation (testing hook): "
                      "qbarbar-scalar, skip-duplication, q-sign");

    try {
        app.parse(argc, argv);
        if (run->parsed())
            return cmd_run(config_path, overrides, out_dir);
        if (sweep->parsed())
            return cmd_sweep(sweep_path);
        return cmd_check(inject_fault);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const bdris::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    }
}
