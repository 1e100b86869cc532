#pragma once

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "instance_forge/ea.hpp"

namespace instance_forge {

/// On-disk layout of one EA run:
///   config.json            full EaConfig plus the evaluation count
///   generations.csv        gen,feat_min,feat_max,range,alpha_min,alpha_max,accepted,removed
///   population/NNN.json    final instances in native format (id = file stem)
///   population/features.csv  file,n,<seven features>,alpha
void write_run(const RunLog& log, const std::filesystem::path& dir);

struct PersistedRun {
    std::filesystem::path dir;
    nlohmann::json config;
    std::size_t n = 0;
    Hardness mode = Hardness::hard;
    WeightSpec measure;
    std::vector<GenerationRecord> generations;
    Population population;
};

/// Reads a run directory. Feature values and ratios come from features.csv,
/// so statistics reproduce the written values exactly. Throws ParseError when
/// files are missing or malformed.
PersistedRun read_run(const std::filesystem::path& dir);

std::string format_generations_csv(const std::vector<GenerationRecord>& records);
std::string format_population_csv(const Population& pop, const std::vector<std::string>& files);

}  // namespace instance_forge
