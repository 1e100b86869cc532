#include "instance_forge/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <set>
#include <thread>

#include "instance_forge/csv.hpp"
#include "instance_forge/errors.hpp"
#include "instance_forge/io.hpp"

namespace instance_forge {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

std::string default_run_name(const json& ea) {
    std::string name = ea.value("mode", std::string("hard")) + "_n" + std::to_string(ea.value("n", 0));
    if (ea.contains("feature") && ea["feature"].is_string()) {
        return name + "_" + ea["feature"].get<std::string>();
    }
    if (ea.contains("measure") && ea["measure"].contains("features")) {
        for (const auto& f : ea["measure"]["features"]) {
            name += "_" + (f.is_string() ? f.get<std::string>() : std::string("?"));
        }
    }
    return name;
}

SweepOptions sweep_options_from_json(const json& doc) {
    SweepOptions opt;
    const auto kernel = doc.value("kernel", std::string("rbf"));
    if (kernel == "rbf") {
        opt.kernel = KernelSpec::rbf(doc.value("gamma", 2.0));
        opt.C = doc.value("C", 100.0);
    } else if (kernel == "linear") {
        opt.kernel = KernelSpec::linear();
        opt.C = doc.value("C", 1.0);
    } else {
        throw ParseError("sweep: field 'kernel' must be 'rbf' or 'linear'");
    }
    if (doc.contains("combo_sizes")) {
        opt.combo_sizes = doc["combo_sizes"].get<std::vector<std::size_t>>();
    }
    opt.pooled = doc.value("pooled", false);
    opt.holdout_fraction = doc.value("holdout", 0.0);
    opt.seed = doc.value("seed", std::uint64_t{0});
    return opt;
}

/// Lets exceptions map to the documented exit codes.
template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_runtime_error;
    }
}

std::vector<PersistedRun> read_runs(const std::vector<fs::path>& dirs) {
    std::vector<PersistedRun> runs;
    runs.reserve(dirs.size());
    for (const auto& d : dirs) {
        runs.push_back(read_run(d));
    }
    return runs;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("config line " + std::to_string(line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0)) + ": " +
                         e.what());
    }
    if (!doc.is_object()) {
        throw ParseError("config: top level must be an object");
    }
    ExperimentConfig cfg;
    std::string field;
    try {
        field = "output_dir";
        cfg.output_dir = doc.value("output_dir", std::string("runs"));
        field = "parallelism";
        cfg.parallelism = doc.value("parallelism", std::size_t{1});
        field = "seeds";
        if (!doc.contains("seeds") || !doc["seeds"].is_array() || doc["seeds"].empty()) {
            throw ParseError("config: field 'seeds' must be a non-empty array of integers");
        }
        cfg.seeds = doc["seeds"].get<std::vector<std::uint64_t>>();
        field = "runs";
        if (!doc.contains("runs") || !doc["runs"].is_array() || doc["runs"].empty()) {
            throw ParseError("config: field 'runs' must be a non-empty array");
        }
        for (std::size_t i = 0; i < doc["runs"].size(); ++i) {
            field = "runs[" + std::to_string(i) + "]";
            const auto& r = doc["runs"][i];
            if (!r.is_object()) {
                throw ParseError("config: field '" + field + "' must be an object");
            }
            if (r.contains("seed")) {
                throw ParseError("config: field '" + field + ".seed' is not allowed; list seeds under 'seeds'");
            }
            RunSpec spec;
            spec.ea = r;
            spec.name = r.value("name", default_run_name(r));
            spec.ea.erase("name");
            cfg.runs.push_back(std::move(spec));
        }
        if (doc.contains("sweep")) {
            field = "sweep";
            SweepSpec s;
            s.options = sweep_options_from_json(doc["sweep"]);
            s.output = doc["sweep"].value("output", std::string("sweep.csv"));
            cfg.sweep = std::move(s);
        }
    } catch (const json::exception& e) {
        throw ParseError("config: field '" + field + "': " + e.what());
    }
    if (cfg.parallelism < 1) {
        throw ParseError("config: field 'parallelism' must be at least 1");
    }
    return cfg;
}

std::vector<PlannedRun> plan_runs(const ExperimentConfig& cfg) {
    std::vector<PlannedRun> plan;
    std::set<std::string> names;
    for (std::size_t i = 0; i < cfg.runs.size(); ++i) {
        const auto& spec = cfg.runs[i];
        EaConfig base;
        try {
            base = EaConfig::from_json(spec.ea);
            base.validate();
        } catch (const ParseError& e) {
            throw ParseError("config: field 'runs[" + std::to_string(i) + "]': " + e.what());
        } catch (const ValidationError& e) {
            throw ValidationError("config: field 'runs[" + std::to_string(i) + "]': " + e.what());
        }
        for (auto seed : cfg.seeds) {
            PlannedRun run{spec.name + "_seed" + std::to_string(seed), base};
            run.config.seed = seed;
            if (!names.insert(run.dir_name).second) {
                throw ValidationError("config: duplicate run directory '" + run.dir_name + "'");
            }
            plan.push_back(std::move(run));
        }
    }
    return plan;
}

std::vector<RunOutcome> execute_runs(const std::vector<PlannedRun>& plan, const fs::path& output_dir,
                                     std::size_t parallelism, std::ostream& log) {
    std::vector<RunOutcome> outcomes(plan.size());
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    auto worker = [&] {
        for (auto k = next++; k < plan.size(); k = next++) {
            const auto dir = output_dir / plan[k].dir_name;
            outcomes[k].dir = dir;
            try {
                const auto result = evolve(plan[k].config);
                write_run(result, dir);
                std::lock_guard lock(log_mutex);
                log << "finished " << plan[k].dir_name << " (" << result.evaluations << " evaluations)\n";
            } catch (const std::exception& e) {
                outcomes[k].error = e.what();
                std::lock_guard lock(log_mutex);
                log << "failed " << plan[k].dir_name << ": " << e.what() << "\n";
            }
        }
    };
    const auto workers = std::max<std::size_t>(1, std::min(parallelism, plan.size()));
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) {
        pool.emplace_back(worker);
    }
    worker();
    return outcomes;
}

double median_of(std::vector<double> values) {
    if (values.empty()) {
        return 0.0;
    }
    std::sort(values.begin(), values.end());
    const auto mid = values.size() / 2;
    return values.size() % 2 == 1 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
}

std::vector<RangeRow> range_report(const std::vector<PersistedRun>& runs) {
    std::vector<RangeRow> rows;
    for (const auto& run : runs) {
        if (run.population.empty()) {
            throw ParseError(run.dir.string() + ": population is empty");
        }
        for (auto f : run.measure.features) {
            std::vector<double> values;
            for (const auto& m : run.population) {
                values.push_back(m.features[f]);
            }
            const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
            RangeRow row{run.dir.filename().string(), f, run.n, run.mode, *lo, *hi, *hi - *lo, 0.0};
            row.median = median_of(std::move(values));
            rows.push_back(row);
        }
    }
    return rows;
}

std::string format_range_csv(const std::vector<RangeRow>& rows) {
    std::string out = "run,feature,n,mode,min,max,range,median\n";
    for (const auto& r : rows) {
        out += csv::join({r.run, std::string(feature_name(r.feature)), std::to_string(r.n),
                          std::string(hardness_name(r.mode)), csv::format_double(r.min), csv::format_double(r.max),
                          csv::format_double(r.range), csv::format_double(r.median)});
        out += '\n';
    }
    return out;
}

std::string format_raw_values_csv(const std::vector<PersistedRun>& runs) {
    std::string out = "run,n,mode,index";
    for (auto f : all_features) {
        out += ',';
        out += feature_name(f);
    }
    out += ",alpha\n";
    for (const auto& run : runs) {
        for (std::size_t i = 0; i < run.population.size(); ++i) {
            std::vector<std::string> row{run.dir.filename().string(), std::to_string(run.n),
                                         std::string(hardness_name(run.mode)), std::to_string(i)};
            for (auto f : all_features) {
                row.push_back(csv::format_double(run.population[i].features[f]));
            }
            row.push_back(csv::format_double(run.population[i].alpha));
            out += csv::join(row) + "\n";
        }
    }
    return out;
}

std::pair<Population, Population> split_by_mode(const std::vector<PersistedRun>& runs) {
    Population easy;
    Population hard;
    for (const auto& run : runs) {
        auto& target = run.mode == Hardness::easy ? easy : hard;
        target.insert(target.end(), run.population.begin(), run.population.end());
    }
    return {std::move(easy), std::move(hard)};
}

OptOracle resolve_oracle(const std::string& spec, std::size_t n) {
    if (spec == "auto") {
        const auto exact = OptOracle::exact();
        if (exact.can_serve(n)) {
            return exact;
        }
        if (const char* env = std::getenv(oracle_env_var); env != nullptr && *env != '\0') {
            return OptOracle::external_command(env);
        }
        return exact;
    }
    return OptOracle::parse_spec(spec);
}

int cmd_evolve(const fs::path& config_path, std::optional<std::size_t> parallelism, std::ostream& out,
               std::ostream& err) {
    return guarded(err, [&] {
        auto cfg = ExperimentConfig::parse(read_file(config_path));
        if (cfg.output_dir.is_relative()) {
            cfg.output_dir = config_path.parent_path() / cfg.output_dir;
        }
        const auto plan = plan_runs(cfg);
        fs::create_directories(cfg.output_dir);
        const auto outcomes = execute_runs(plan, cfg.output_dir, parallelism.value_or(cfg.parallelism), err);
        bool failed = false;
        std::vector<fs::path> done;
        for (const auto& o : outcomes) {
            if (o.error.empty()) {
                out << o.dir.string() << "\n";
                done.push_back(o.dir);
            } else {
                failed = true;
            }
        }
        if (cfg.sweep && !failed) {
            auto target = cfg.sweep->output.is_relative() ? cfg.output_dir / cfg.sweep->output : cfg.sweep->output;
            const auto [easy, hard] = split_by_mode(read_runs(done));
            if (easy.empty() || hard.empty()) {
                err << "skipping sweep: runs do not cover both easy and hard modes\n";
            } else {
                write_file_atomic(target, format_sweep_csv(combination_sweep(easy, hard, cfg.sweep->options)));
            }
        }
        return failed ? exit_runtime_error : exit_ok;
    });
}

int cmd_features(const std::vector<fs::path>& paths, std::ostream& out, std::ostream& err) {
    std::string header = "id,n";
    for (auto f : all_features) {
        header += ',';
        header += feature_name(f);
    }
    out << header << "\n";
    int status = exit_ok;
    for (const auto& p : paths) {
        const int rc = guarded(err, [&] {
            const auto inst = read_instance(p);
            const auto fv = compute_all(inst);
            std::vector<std::string> row{inst.id().empty() ? p.stem().string() : inst.id(), std::to_string(inst.size())};
            for (auto f : all_features) {
                row.push_back(csv::format_double(fv[f]));
            }
            out << csv::join(row) << "\n";
            return exit_ok;
        });
        status = std::max(status, rc);
    }
    return status;
}

int cmd_solve(const fs::path& path, std::size_t restarts, const std::string& oracle_spec, std::uint64_t seed,
              std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (restarts < 1) {
            throw ValidationError("--restarts must be at least 1");
        }
        const auto inst = read_instance(path);
        const auto oracle = resolve_oracle(oracle_spec, inst.size());
        RandomSource rng(seed);
        const auto report = evaluate_ratio(inst, oracle, rng, restarts);
        json doc = {
            {"A", report.a},
            {"OPT", report.opt},
            {"alpha", report.alpha},
            {"best_tour", std::vector<int>(report.best_tour.order().begin(), report.best_tour.order().end())},
            {"restarts", restarts},
            {"oracle", oracle.describe()},
        };
        out << doc.dump(2) << "\n";
        return exit_ok;
    });
}

int cmd_report_ranges(const std::vector<fs::path>& dirs, const std::optional<fs::path>& raw, std::ostream& out,
                      std::ostream& err) {
    return guarded(err, [&] {
        const auto runs = read_runs(dirs);
        out << format_range_csv(range_report(runs));
        if (raw) {
            write_file_atomic(*raw, format_raw_values_csv(runs));
        }
        return exit_ok;
    });
}

int cmd_classify(const std::vector<fs::path>& dirs, const SweepOptions& options, std::ostream& out,
                 std::ostream& err) {
    return guarded(err, [&] {
        const auto [easy, hard] = split_by_mode(read_runs(dirs));
        if (easy.empty() || hard.empty()) {
            throw ValidationError("classify needs populations of both modes; got " + std::to_string(easy.size()) +
                                  " easy and " + std::to_string(hard.size()) + " hard instances");
        }
        out << format_sweep_csv(combination_sweep(easy, hard, options));
        return exit_ok;
    });
}

}  // namespace instance_forge
