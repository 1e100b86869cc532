#include "instance_forge/oracle.hpp"

#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "instance_forge/errors.hpp"
#include "instance_forge/io.hpp"

namespace instance_forge {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::filesystem::path unique_temp_path() {
    static std::atomic<std::uint64_t> counter{0};
    const auto name = "instance_forge_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".json";
    return std::filesystem::temp_directory_path() / name;
}

double parse_length(const std::string& text, const std::string& source) {
    const auto first = text.find_first_not_of(" \t\r\n");
    const auto last = text.find_last_not_of(" \t\r\n");
    if (first == std::string::npos) {
        throw OracleError(source + " produced no output");
    }
    const auto token = text.substr(first, last - first + 1);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != token.size() || !std::isfinite(value) || value <= 0.0) {
        throw OracleError(source + " output is not a positive decimal number: '" + token + "'");
    }
    return value;
}

double run_external(const std::string& command_template, const TspInstance& inst) {
    const auto path = unique_temp_path();
    write_instance(inst, path);
    std::string command = command_template;
    if (const auto pos = command.find(oracle_path_placeholder); pos != std::string::npos) {
        command.replace(pos, oracle_path_placeholder.size(), path.string());
    } else {
        command += " " + path.string();
    }

    std::string output;
    FILE* pipe = ::popen(command.c_str(), "r");
    if (pipe == nullptr) {
        std::filesystem::remove(path);
        throw OracleError("cannot start oracle command '" + command + "'");
    }
    char buffer[256];
    std::size_t got = 0;
    while ((got = std::fread(buffer, 1, sizeof buffer, pipe)) > 0) {
        output.append(buffer, got);
    }
    const int status = ::pclose(pipe);
    std::error_code ignored;
    std::filesystem::remove(path, ignored);
    if (status != 0) {
        throw OracleError("oracle command '" + command + "' exited with status " + std::to_string(status));
    }
    return parse_length(output, "oracle command '" + command + "'");
}

}  // namespace

OptOracle OptOracle::exact(std::size_t max_exact) {
    if (max_exact < TspInstance::min_cities) {
        throw ValidationError("max_exact must be at least 3");
    }
    return OptOracle(Exact{max_exact});
}

OptOracle OptOracle::external_command(std::string command_template) {
    if (command_template.find_first_not_of(" \t") == std::string::npos) {
        throw ValidationError("external oracle command template is empty");
    }
    return OptOracle(ExternalCommand{std::move(command_template)});
}

OptOracle OptOracle::cached_file(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": invalid JSON: " + e.what());
    }
    if (!doc.is_object()) {
        throw ParseError(path.string() + ": cached oracle file must map instance ids to lengths");
    }
    auto table = std::make_shared<std::map<std::string, double>>();
    for (const auto& [id, value] : doc.items()) {
        if (!value.is_number() || value.get<double>() <= 0.0) {
            throw ParseError(path.string() + ": field '" + id + "' must be a positive number");
        }
        table->emplace(id, value.get<double>());
    }
    return OptOracle(CachedFile{path, std::move(table)});
}

OptOracle OptOracle::parse_spec(std::string_view spec) {
    const auto colon = spec.find(':');
    const auto kind = spec.substr(0, colon);
    const auto arg = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
    if (kind == "exact") {
        if (arg.empty()) {
            return exact();
        }
        try {
            return exact(std::stoul(std::string(arg)));
        } catch (const std::logic_error&) {
            throw ValidationError("invalid exact oracle capacity '" + std::string(arg) + "'");
        }
    }
    if (kind == "cmd") {
        return external_command(std::string(arg));
    }
    if (kind == "cached") {
        return cached_file(std::string(arg));
    }
    throw ValidationError("unknown oracle spec '" + std::string(spec) + "' (expected exact[:N], cmd:<template>, cached:<path>)");
}

OptOracle OptOracle::from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string()) {
        throw ParseError("oracle: missing field 'kind'");
    }
    const auto kind = doc["kind"].get<std::string>();
    if (kind == "exact_dp") {
        return exact(doc.value("max_exact", default_max_exact));
    }
    if (kind == "external_command") {
        auto tmpl = doc.value("command", std::string{});
        if (tmpl.empty()) {
            if (const char* env = std::getenv(oracle_env_var)) {
                tmpl = env;
            }
        }
        if (tmpl.empty()) {
            throw ValidationError(std::string("oracle: field 'command' is empty and ") + oracle_env_var + " is unset");
        }
        return external_command(std::move(tmpl));
    }
    if (kind == "cached_file") {
        if (!doc.contains("path") || !doc["path"].is_string()) {
            throw ParseError("oracle: missing field 'path'");
        }
        return cached_file(doc["path"].get<std::string>());
    }
    throw ParseError("oracle: unknown kind '" + kind + "'");
}

json OptOracle::to_json() const {
    return std::visit(overloaded{
                          [](const Exact& e) { return json{{"kind", "exact_dp"}, {"max_exact", e.max_exact}}; },
                          [](const ExternalCommand& e) {
                              return json{{"kind", "external_command"}, {"command", e.command_template}};
                          },
                          [](const CachedFile& c) { return json{{"kind", "cached_file"}, {"path", c.path.string()}}; },
                      },
                      mode_);
}

bool OptOracle::can_serve(std::size_t n) const noexcept {
    if (const auto* e = std::get_if<Exact>(&mode_)) {
        return n <= e->max_exact;
    }
    return true;
}

double OptOracle::optimal_length(const TspInstance& inst) const {
    return std::visit(overloaded{
                          [&](const Exact& e) { return exact_optimum(inst, e.max_exact); },
                          [&](const ExternalCommand& e) { return run_external(e.command_template, inst); },
                          [&](const CachedFile& c) {
                              const auto it = c.lengths->find(inst.id());
                              if (it == c.lengths->end()) {
                                  throw OracleError("cached oracle '" + c.path.string() + "' has no entry for id '" +
                                                    inst.id() + "'");
                              }
                              return it->second;
                          },
                      },
                      mode_);
}

std::string OptOracle::describe() const {
    return std::visit(overloaded{
                          [](const Exact& e) { return "exact_dp(max_exact=" + std::to_string(e.max_exact) + ")"; },
                          [](const ExternalCommand& e) { return "external_command(" + e.command_template + ")"; },
                          [](const CachedFile& c) { return "cached_file(" + c.path.string() + ")"; },
                      },
                      mode_);
}

RatioReport evaluate_ratio(const TspInstance& inst, const OptOracle& oracle, RandomSource& rng, std::size_t runs) {
    auto solve = two_opt_mean_quality(inst, runs, rng);
    const double opt = oracle.optimal_length(inst);
    if (!(opt > 0.0)) {
        throw OracleError("oracle returned non-positive optimum " + std::to_string(opt));
    }
    if (solve.mean_length < opt * (1.0 - ratio_tolerance)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "oracle inconsistency: mean 2-OPT length " << solve.mean_length << " is below reported optimum " << opt;
        throw OracleError(msg.str());
    }
    double alpha = solve.mean_length / opt;
    if (std::abs(alpha - 1.0) <= ratio_tolerance) {
        alpha = 1.0;
    }
    return RatioReport{solve.mean_length, opt, alpha, std::move(solve.best_tour)};
}

double approximation_ratio(const TspInstance& inst, const OptOracle& oracle, RandomSource& rng) {
    return evaluate_ratio(inst, oracle, rng).alpha;
}

}  // namespace instance_forge
