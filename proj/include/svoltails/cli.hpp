#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "svoltails/params.hpp"

namespace svt {

inline constexpr const char* version_string = "svoltails 0.1.0";

enum class Spacing { linear, log };

struct GridSpec {
    double min = 1.0;
    double max = 6.0;
    int count = 11;
    Spacing spacing = Spacing::linear;
};

struct RunConfig {
    std::string command;
    std::string model = "heston";
    double t = 1.0;
    double rate = 0.0;
    // unset fields take the model defaults
    std::optional<double> mu, x0, y0, a, b, c, q, m, sigma;
    std::string density = "mixing";  // mixing | stock
    std::optional<GridSpec> grid;
    std::uint64_t paths = 100000;
    int steps = 1024;
    std::uint64_t seed = 42;
    std::optional<double> ks_threshold;
    std::string out;
    std::string config_path;
    std::string corrupt_constant;  // test hook: scales the named mixing constant by 1.5
};

// Effective model with defaults filled in; throws DomainError naming the violated invariant.
Model resolve_model(const RunConfig& cfg);
void validate(const RunConfig& cfg);
GridSpec resolve_grid(const RunConfig& cfg);
std::vector<double> grid_points(const GridSpec& g);

int cmd_constants(const RunConfig& cfg, std::ostream& out);
int cmd_density(const RunConfig& cfg, std::ostream& out);
int cmd_smile(const RunConfig& cfg, std::ostream& out);
int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Full command line: parse, dispatch, map errors to exit codes (0 ok, 1 validation, 2 input, 3 numerical).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace svt
