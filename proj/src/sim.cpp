#include "bdris/sim.hpp"

#include "bdris/errors.hpp"
#include "bdris/rng.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

namespace bdris {

namespace {

double nan_value() {
    return std::numeric_limits<double>::quiet_NaN();
}

std::string format_db(double linear) {
    if (linear <= 0.0)
        return "-inf";
    return format_double(10.0 * std::log10(linear));
}

std::string format_bool(bool b) {
    return b ? "true" : "false";
}

} // namespace

std::string format_double(double v) {
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

SingleRun run_single(const SystemConfig& cfg, const ArchSpec& arch, const ChannelSet& ch,
                     const ComplexMatrix& shared_init, bool collect_trace) {
    const auto t0 = std::chrono::steady_clock::now();

    SingleRun out;
    ResultRecord& rec = out.record;
    rec.architecture = arch.canonical(cfg);
    rec.trial_index = ch.trial_index;
    rec.seed = cfg.seed;
    rec.beta = cfg.beta;
    rec.l_elements = cfg.ris_elements();
    rec.res_phi0 = rec.res_phi1 = rec.res_u = nan_value();

    switch (arch.family) {
        case ArchSpec::Family::bdris:
        case ArchSpec::Family::dris: {
            SystemConfig run_cfg = cfg;
            run_cfg.resolution = arch.effective_resolution(cfg);
            const PhaseMode mode =
                run_cfg.resolution >= 2 ? PhaseMode::discrete : PhaseMode::continuous;
            RunOptions opts;
            opts.initial_phi = shared_init;
            opts.collect_trace = collect_trace;
            const RunResult r = arch.family == ArchSpec::Family::bdris
                                    ? run_algorithm1(run_cfg, ch, mode, opts)
                                    : dris_optimize(run_cfg, ch, mode, opts);
            rec.resolution = run_cfg.resolution;
            rec.snr_c = r.snr_c;
            rec.snr_r = r.snr_r;
            rec.snr_t = r.snr_t;
            rec.outer_iterations = r.outer_iterations;
            rec.converged = r.converged;
            rec.unitarity_residual = r.unitarity_residual;
            rec.res_phi0 = (r.state.phi0 - r.state.phi).norm();
            if (r.state.phi1)
                rec.res_phi1 = (*r.state.phi1 - r.state.phi).norm();
            if (r.state.u.size() > 0)
                rec.res_u = (vech(r.state.u) - r.state.phi).norm();
            out.trace = r.trace;
            break;
        }
        case ArchSpec::Family::no_ris: {
            const SnrTriple s = no_ris_snr(cfg, ch);
            rec.resolution = 0;
            rec.snr_c = s.snr_c;
            rec.snr_r = s.snr_r;
            rec.snr_t = s.snr_t;
            rec.outer_iterations = 0;
            rec.converged = true;
            rec.unitarity_residual = 0.0;
            break;
        }
        case ArchSpec::Family::random: {
            const SnrTriple s = evaluate_surface(cfg, ch, shared_init);
            const int l = cfg.ris_elements();
            rec.resolution = 0;
            rec.snr_c = s.snr_c;
            rec.snr_r = s.snr_r;
            rec.snr_t = s.snr_t;
            rec.outer_iterations = 0;
            rec.converged = true;
            rec.unitarity_residual =
                (shared_init.adjoint() * shared_init - ComplexMatrix::Identity(l, l)).norm();
            break;
        }
    }

    rec.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

int sweep_thread_count() {
    if (const char* env = std::getenv("BDRIS_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1)
            return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

SystemConfig config_for_value(const SweepSpec& spec, std::size_t v) {
    SystemConfig cfg = spec.base;
    if (spec.axis == "beta") {
        cfg.beta = spec.beta_values[v];
    } else if (spec.axis == "L") {
        cfg.ris_lx = spec.l_values[v].first;
        cfg.ris_ly = spec.l_values[v].second;
    } else if (spec.axis == "M") {
        cfg.resolution = spec.m_values[v];
    }
    return cfg;
}

std::vector<std::string> archs_for_value(const SweepSpec& spec, std::size_t v) {
    if (spec.axis == "architecture")
        return {spec.architectures[v]};
    return spec.architectures;
}

} // namespace

SweepOutput run_sweep(const SweepSpec& spec) {
    spec.validate();
    const std::size_t n_values = spec.value_tokens.size();
    const std::size_t n_trials = static_cast<std::size_t>(spec.trials);

    struct Job {
        std::size_t value_index;
        std::size_t trial;
    };
    std::vector<Job> jobs;
    jobs.reserve(n_values * n_trials);
    for (std::size_t v = 0; v < n_values; ++v)
        for (std::size_t t = 0; t < n_trials; ++t)
            jobs.push_back({v, t});

    std::vector<std::vector<SingleRun>> results(jobs.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string failure_message;
    std::mutex failure_mutex;

    auto worker = [&]() {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= jobs.size() || failed.load())
                return;
            const Job job = jobs[idx];
            try {
                const SystemConfig cfg = config_for_value(spec, job.value_index);
                const ChannelSet ch = sample_channels(cfg, job.trial);
                auto init_rng = make_stream(cfg.seed, job.trial, StreamTag::init);
                const ComplexMatrix shared_init =
                    random_symmetric_unitary(cfg.ris_elements(), init_rng);

                std::vector<SingleRun> runs;
                for (const std::string& token : archs_for_value(spec, job.value_index)) {
                    const ArchSpec arch = parse_architecture(token);
                    SingleRun run = run_single(cfg, arch, ch, shared_init, true);
                    run.record.axis = spec.axis;
                    run.record.value_token = spec.value_tokens[job.value_index];
                    run.trace_id = spec.value_tokens[job.value_index] + "-" +
                                   run.record.architecture + "-t" + std::to_string(job.trial);
                    runs.push_back(std::move(run));
                }
                results[idx] = std::move(runs);
            } catch (const std::exception& e) {
                std::scoped_lock lock(failure_mutex);
                if (!failed.exchange(true))
                    failure_message = e.what();
                return;
            }
        }
    };

    const int threads = std::min<int>(sweep_thread_count(), static_cast<int>(jobs.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int i = 0; i < threads; ++i)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    if (failed.load())
        throw NumericalError("sweep failed: " + failure_message);

    // Deterministic order regardless of scheduling: value, architecture, trial.
    SweepOutput out;
    for (std::size_t v = 0; v < n_values; ++v) {
        const std::size_t n_archs = archs_for_value(spec, v).size();
        for (std::size_t a = 0; a < n_archs; ++a)
            for (std::size_t t = 0; t < n_trials; ++t)
                out.runs.push_back(std::move(results[v * n_trials + t][a]));
    }
    std::vector<ResultRecord> records;
    records.reserve(out.runs.size());
    for (const SingleRun& run : out.runs)
        records.push_back(run.record);
    out.aggregate_lines = aggregate_rows(records);
    return out;
}

std::string record_csv_header() {
    return std::string("# schema ") + kCsvSchemaVersion +
           "\naxis,value,architecture,trial,seed,beta,l,resolution,"
           "snr_c,snr_r,snr_t,snr_c_db,snr_r_db,snr_t_db,"
           "outer_iterations,converged,unitarity_residual,res_phi0,res_phi1,res_u\n";
}

std::string record_csv_row(const ResultRecord& r) {
    std::string s;
    s += r.axis + "," + r.value_token + "," + r.architecture + ",";
    s += std::to_string(r.trial_index) + "," + std::to_string(r.seed) + ",";
    s += format_double(r.beta) + "," + std::to_string(r.l_elements) + ",";
    s += std::to_string(r.resolution) + ",";
    s += format_double(r.snr_c) + "," + format_double(r.snr_r) + "," + format_double(r.snr_t) + ",";
    s += format_db(r.snr_c) + "," + format_db(r.snr_r) + "," + format_db(r.snr_t) + ",";
    s += std::to_string(r.outer_iterations) + "," + format_bool(r.converged) + ",";
    s += format_double(r.unitarity_residual) + "," + format_double(r.res_phi0) + ",";
    s += format_double(r.res_phi1) + "," + format_double(r.res_u) + "\n";
    return s;
}

std::string record_jsonl(const ResultRecord& r) {
    nlohmann::json j;
    j["axis"] = r.axis;
    j["value"] = r.value_token;
    j["architecture"] = r.architecture;
    j["trial"] = r.trial_index;
    j["seed"] = r.seed;
    j["beta"] = r.beta;
    j["l"] = r.l_elements;
    j["resolution"] = r.resolution;
    j["snr_c"] = r.snr_c;
    j["snr_r"] = r.snr_r;
    j["snr_t"] = r.snr_t;
    j["outer_iterations"] = r.outer_iterations;
    j["converged"] = r.converged;
    j["unitarity_residual"] = r.unitarity_residual;
    j["res_phi0"] = r.res_phi0;
    j["res_phi1"] = r.res_phi1;
    j["res_u"] = r.res_u;
    j["wall_time_seconds"] = r.wall_time_seconds;
    // NaN is not valid JSON; emit nulls for not-applicable residuals.
    for (const char* key : {"res_phi0", "res_phi1", "res_u"})
        if (std::isnan(j[key].get<double>()))
            j[key] = nullptr;
    return j.dump() + "\n";
}

std::string aggregate_csv_header() {
    return std::string("# schema ") + kCsvSchemaVersion +
           "\naxis,value,architecture,trials,converged_count,outer_iterations_mean,"
           "snr_c_mean,snr_c_std,snr_r_mean,snr_r_std,snr_t_mean,snr_t_std,"
           "snr_c_mean_db,snr_r_mean_db,snr_t_mean_db,unitarity_residual_mean\n";
}

std::vector<std::string> aggregate_rows(const std::vector<ResultRecord>& records) {
    std::vector<std::string> rows;
    std::size_t i = 0;
    while (i < records.size()) {
        std::size_t j = i;
        while (j < records.size() && records[j].axis == records[i].axis &&
               records[j].value_token == records[i].value_token &&
               records[j].architecture == records[i].architecture)
            ++j;
        const std::size_t n = j - i;
        auto mean_of = [&](auto field) {
            double sum = 0.0;
            for (std::size_t k = i; k < j; ++k)
                sum += field(records[k]);
            return sum / static_cast<double>(n);
        };
        auto std_of = [&](auto field, double mean) {
            if (n < 2)
                return 0.0;
            double sum = 0.0;
            for (std::size_t k = i; k < j; ++k)
                sum += (field(records[k]) - mean) * (field(records[k]) - mean);
            return std::sqrt(sum / static_cast<double>(n - 1));
        };
        const double mc = mean_of([](const ResultRecord& r) { return r.snr_c; });
        const double mr = mean_of([](const ResultRecord& r) { return r.snr_r; });
        const double mt = mean_of([](const ResultRecord& r) { return r.snr_t; });
        const double sc = std_of([](const ResultRecord& r) { return r.snr_c; }, mc);
        const double sr = std_of([](const ResultRecord& r) { return r.snr_r; }, mr);
        const double st = std_of([](const ResultRecord& r) { return r.snr_t; }, mt);
        const double iters =
            mean_of([](const ResultRecord& r) { return static_cast<double>(r.outer_iterations); });
        const double ures = mean_of([](const ResultRecord& r) { return r.unitarity_residual; });
        std::size_t conv = 0;
        for (std::size_t k = i; k < j; ++k)
            conv += records[k].converged ? 1 : 0;

        std::string row;
        row += records[i].axis + "," + records[i].value_token + "," + records[i].architecture + ",";
        row += std::to_string(n) + "," + std::to_string(conv) + "," + format_double(iters) + ",";
        row += format_double(mc) + "," + format_double(sc) + ",";
        row += format_double(mr) + "," + format_double(sr) + ",";
        row += format_double(mt) + "," + format_double(st) + ",";
        row += format_db(mc) + "," + format_db(mr) + "," + format_db(mt) + ",";
        row += format_double(ures) + "\n";
        rows.push_back(std::move(row));
        i = j;
    }
    return rows;
}

std::string trace_csv(const std::vector<TraceRow>& trace) {
    std::string s = std::string("# schema ") + kCsvSchemaVersion +
                    "\nouter_iter,snr_t,snr_c,snr_r,lagrangian,res_phi0,res_phi1,res_u,unitarity\n";
    for (const TraceRow& row : trace) {
        s += std::to_string(row.outer_iter) + ",";
        s += format_double(row.snr_t) + "," + format_double(row.snr_c) + ",";
        s += format_double(row.snr_r) + "," + format_double(row.lagrangian) + ",";
        s += format_double(row.res_phi0) + "," + format_double(row.res_phi1) + ",";
        s += format_double(row.res_u) + "," + format_double(row.unitarity) + "\n";
    }
    return s;
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path())
        std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out)
        throw ConfigError(path + ": cannot open for writing");
    out << content;
    if (!out)
        throw ConfigError(path + ": write failed");
}

} // namespace bdris
