#pragma once

#include "bdris/baselines.hpp"
#include "bdris/channel.hpp"
#include "bdris/config.hpp"
#include "bdris/optimizer.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bdris {

inline constexpr const char* kCsvSchemaVersion = "1";

// Flat result of one (architecture, trial) run. Everything except
// wall_time_seconds is deterministic given the config.
struct ResultRecord {
    std::string axis;        // sweep axis name, "-" for plain runs
    std::string value_token; // printable axis value, "-" for plain runs
    std::string architecture; // canonical token, e.g. bdris-continuous, bdris-4, dris-8, no-ris, random
    std::uint64_t trial_index = 0;
    std::uint64_t seed = 0;
    double beta = 0.0;
    int l_elements = 0;
    int resolution = 0; // 0 = continuous
    double snr_c = 0.0, snr_r = 0.0, snr_t = 0.0; // linear
    int outer_iterations = 0;
    bool converged = true;
    double unitarity_residual = 0.0;
    double res_phi0 = 0.0, res_phi1 = 0.0, res_u = 0.0; // NaN where not applicable
    double wall_time_seconds = 0.0; // only serialized to records.jsonl
};

struct SingleRun {
    ResultRecord record;
    std::vector<TraceRow> trace;
    std::string trace_id; // file stem for trace-<id>.csv, empty when no trace
};

// Execute one architecture on one realization. `shared_init` is the common
// starting surface for paired comparisons; pass the same matrix to every
// architecture on a given (value, trial).
SingleRun run_single(const SystemConfig& cfg, const ArchSpec& arch, const ChannelSet& ch,
                     const ComplexMatrix& shared_init, bool collect_trace);

struct SweepOutput {
    std::vector<SingleRun> runs; // sorted by (value index, architecture index, trial)
    std::vector<std::string> aggregate_lines; // results.csv body rows
};

// Run the whole grid. Parallel across (value, trial) jobs; thread count
// honors the BDRIS_THREADS environment variable.
SweepOutput run_sweep(const SweepSpec& spec);

// Serialization. CSV files carry a schema-version header comment and no
// timing columns, so byte-identical reruns are possible; the JSONL copy
// additionally records wall_time_seconds.
std::string format_double(double v);
std::string record_csv_header();
std::string record_csv_row(const ResultRecord& r);
std::string record_jsonl(const ResultRecord& r);
std::string aggregate_csv_header();
std::vector<std::string> aggregate_rows(const std::vector<ResultRecord>& records);
std::string trace_csv(const std::vector<TraceRow>& trace);

void write_text_file(const std::string& path, const std::string& content);

// Number of worker threads: BDRIS_THREADS if set (>= 1), else hardware concurrency.
int sweep_thread_count();

} // namespace bdris
