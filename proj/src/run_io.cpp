#include "instance_forge/run_io.hpp"

#include <cstdio>
#include <sstream>

#include "instance_forge/csv.hpp"
#include "instance_forge/errors.hpp"
#include "instance_forge/io.hpp"

namespace instance_forge {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* generations_header = "gen,feat_min,feat_max,range,alpha_min,alpha_max,accepted,removed";

std::string population_header() {
    std::string h = "file,n";
    for (auto f : all_features) {
        h += ',';
        h += feature_name(f);
    }
    return h + ",alpha";
}

std::string member_file(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%03zu", i);
    return buf;
}

std::vector<std::string> read_lines(const fs::path& path) {
    std::istringstream in(read_file(path));
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line != "\r") {
            lines.push_back(line);
        }
    }
    return lines;
}

}  // namespace

std::string format_generations_csv(const std::vector<GenerationRecord>& records) {
    std::string out = std::string(generations_header) + "\n";
    for (const auto& r : records) {
        out += csv::join({std::to_string(r.generation), csv::format_double(r.feature_min),
                          csv::format_double(r.feature_max), csv::format_double(r.range),
                          csv::format_double(r.alpha_min), csv::format_double(r.alpha_max),
                          std::to_string(r.accepted), std::to_string(r.removed)});
        out += '\n';
    }
    return out;
}

std::string format_population_csv(const Population& pop, const std::vector<std::string>& files) {
    std::string out = population_header() + "\n";
    for (std::size_t i = 0; i < pop.size(); ++i) {
        std::vector<std::string> row{files[i], std::to_string(pop[i].inst.size())};
        for (auto f : all_features) {
            row.push_back(csv::format_double(pop[i].features[f]));
        }
        row.push_back(csv::format_double(pop[i].alpha));
        out += csv::join(row) + "\n";
    }
    return out;
}

void write_run(const RunLog& log, const fs::path& dir) {
    fs::create_directories(dir / "population");
    auto config = log.config.to_json();
    config["evaluations"] = log.evaluations;
    write_file_atomic(dir / "config.json", config.dump(2) + "\n");
    write_file_atomic(dir / "generations.csv", format_generations_csv(log.generations));

    std::vector<std::string> files;
    for (std::size_t i = 0; i < log.population.size(); ++i) {
        const auto stem = member_file(i);
        files.push_back(stem + ".json");
        write_instance(log.population[i].inst.with_id(stem), dir / "population" / files.back());
    }
    write_file_atomic(dir / "population" / "features.csv", format_population_csv(log.population, files));
}

PersistedRun read_run(const fs::path& dir) {
    PersistedRun run;
    run.dir = dir;
    const auto config_path = dir / "config.json";
    if (!fs::exists(config_path)) {
        throw ParseError(dir.string() + ": missing config.json");
    }
    try {
        run.config = json::parse(read_file(config_path));
        run.n = run.config.at("n").get<std::size_t>();
        run.mode = parse_hardness(run.config.at("mode").get<std::string>());
        run.measure = WeightSpec::from_json(run.config.at("measure"));
    } catch (const json::exception& e) {
        throw ParseError(config_path.string() + ": " + e.what());
    }

    const auto gen_path = dir / "generations.csv";
    if (fs::exists(gen_path)) {
        const auto lines = read_lines(gen_path);
        for (std::size_t i = 1; i < lines.size(); ++i) {
            const auto f = csv::split(lines[i]);
            const auto ctx = gen_path.string() + " line " + std::to_string(i + 1);
            if (f.size() != 8) {
                throw ParseError(ctx + ": expected 8 fields");
            }
            GenerationRecord r;
            r.generation = static_cast<std::size_t>(csv::parse_double(f[0], ctx));
            r.feature_min = csv::parse_double(f[1], ctx);
            r.feature_max = csv::parse_double(f[2], ctx);
            r.range = csv::parse_double(f[3], ctx);
            r.alpha_min = csv::parse_double(f[4], ctx);
            r.alpha_max = csv::parse_double(f[5], ctx);
            r.accepted = static_cast<std::size_t>(csv::parse_double(f[6], ctx));
            r.removed = static_cast<std::size_t>(csv::parse_double(f[7], ctx));
            run.generations.push_back(r);
        }
    }

    const auto pop_path = dir / "population" / "features.csv";
    if (!fs::exists(pop_path)) {
        throw ParseError(dir.string() + ": missing population/features.csv");
    }
    const auto lines = read_lines(pop_path);
    if (lines.empty() || lines.front() != population_header()) {
        throw ParseError(pop_path.string() + ": unexpected header");
    }
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = csv::split(lines[i]);
        const auto ctx = pop_path.string() + " line " + std::to_string(i + 1);
        if (f.size() != feature_count + 3) {
            throw ParseError(ctx + ": expected " + std::to_string(feature_count + 3) + " fields");
        }
        EvaluatedInstance member{read_instance(dir / "population" / f[0]), {}, 0.0};
        for (std::size_t k = 0; k < feature_count; ++k) {
            member.features[all_features[k]] = csv::parse_double(f[k + 2], ctx);
        }
        member.alpha = csv::parse_double(f.back(), ctx);
        run.population.push_back(std::move(member));
    }
    return run;
}

}  // namespace instance_forge
