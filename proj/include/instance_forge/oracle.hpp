#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "instance_forge/instance.hpp"
#include "instance_forge/solvers.hpp"

namespace instance_forge {

/// Placeholder replaced by the temporary instance path in a command template.
inline constexpr std::string_view oracle_path_placeholder = "{instance}";

/// Environment variable that may supply the external-solver command template.
inline constexpr const char* oracle_env_var = "INSTANCE_FORGE_ORACLE_CMD";

/// Source of optimal tour lengths OPT(I).
///
/// - exact: Held-Karp, refuses n > max_exact.
/// - external command: the instance is written to a temporary native JSON file,
///   the template is run with `{instance}` replaced by that path (the path is
///   appended when the template has no placeholder), and standard output must
///   hold a single decimal number.
/// - cached file: JSON map {"instance_id": length}, looked up by TspInstance::id().
class OptOracle {
public:
    struct Exact {
        std::size_t max_exact = default_max_exact;
    };
    struct ExternalCommand {
        std::string command_template;
    };
    struct CachedFile {
        std::filesystem::path path;
        std::shared_ptr<const std::map<std::string, double>> lengths;
    };

    static OptOracle exact(std::size_t max_exact = default_max_exact);
    static OptOracle external_command(std::string command_template);
    /// Loads the table immediately; throws ParseError on a malformed file.
    static OptOracle cached_file(const std::filesystem::path& path);

    /// CLI form: "exact", "exact:<max>", "cmd:<template>", "cached:<path>".
    static OptOracle parse_spec(std::string_view spec);

    static OptOracle from_json(const nlohmann::json& doc);
    nlohmann::json to_json() const;

    /// False only for the exact solver beyond its capacity.
    bool can_serve(std::size_t n) const noexcept;
    double optimal_length(const TspInstance& inst) const;
    std::string describe() const;

    const auto& mode() const noexcept { return mode_; }

private:
    explicit OptOracle(std::variant<Exact, ExternalCommand, CachedFile> mode) : mode_(std::move(mode)) {}

    std::variant<Exact, ExternalCommand, CachedFile> mode_;
};

struct RatioReport {
    double a = 0.0;    // mean 2-OPT length
    double opt = 0.0;  // optimal length from the oracle
    double alpha = 0.0;
    Tour best_tour;
};

/// Relative tolerance for comparing A(I) with OPT(I).
inline constexpr double ratio_tolerance = 1e-9;

/// alpha = A(I) / OPT(I) with A(I) the mean over `runs` 2-OPT restarts. A ratio
/// within ratio_tolerance of 1 is reported as exactly 1. Throws OracleError
/// when A(I) < OPT(I) beyond the tolerance.
RatioReport evaluate_ratio(const TspInstance& inst, const OptOracle& oracle, RandomSource& rng,
                           std::size_t runs = default_restarts);

double approximation_ratio(const TspInstance& inst, const OptOracle& oracle, RandomSource& rng);

}  // namespace instance_forge
