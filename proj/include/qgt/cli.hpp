#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qgt/derivatives.hpp"
#include "qgt/models.hpp"
#include "qgt/transport.hpp"

namespace qgt::cli {

enum class Task { tensor, sweep, transport, theta_g, volume, verify, distance, models };

enum class OutputFormat { csv, json };

struct GridAxis {
    std::string name;
    double start = 0.0;
    double stop = 1.0;
    int count = 2;
};

struct RunConfig {
    Task task = Task::tensor;
    std::string model;

    ModelConfig mc;
    int dim = 3;       // random model only
    int n_params = 2;  // random model only

    std::optional<ParameterPoint> at;
    std::optional<ParameterPoint> to;
    std::vector<GridAxis> grid;
    std::string curve_spec;
    int curve_steps = 512;
    std::string patch_spec;

    StepPolicy fd;

    std::string output_path;  // empty writes to stdout
    OutputFormat format = OutputFormat::json;
    int threads = 0;  // 0 = QGT_THREADS env or hardware concurrency

    std::string suite = "inequalities";  // verify task
    std::uint64_t suite_seed = 7;
    int draws = 500;
};

/// Parses the flat key=value config format with [section] headers.
/// Unknown sections or keys raise ParseError with line and column.
/// The parsed config is not yet validated: flags may still override values.
RunConfig parse_config(const std::string& text);

/// Task/region compatibility and model checks; throws UnknownModel,
/// IncompatibleTaskRegion or ValidationError.
void validate_config(const RunConfig& config);

/// Builds the model named in the config. Throws UnknownModel.
FamilyPtr make_family(const RunConfig& config);

Curve make_curve(const RunConfig& config);
SurfacePatch make_patch(const RunConfig& config);

Task task_from_name(const std::string& name);
const char* task_name(Task task);

/// Flag-value parsers shared with the config file format.
ParameterPoint parse_point_arg(const std::string& text);
std::vector<GridAxis> parse_grid_arg(const std::string& text);

/// Executes the configured task. Returns 0 on success, 2 on validation
/// errors, 3 on numerical failures (the offending point is logged).
int run(const RunConfig& config);

}  // namespace qgt::cli
