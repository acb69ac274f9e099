#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace pwaves::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerify = 1;
inline constexpr int kExitSolver = 2;
inline constexpr int kExitUsage = 64;

// Set to redirect every file the tool writes when no explicit path is given.
inline constexpr const char* kOutputDirEnv = "PWAVES_OUTPUT_DIR";

struct RunConfig {
    double epsilon = 0.05;
    double epsilon_max = 0.2;
    std::vector<double> sigmas{1e-2, 5e-3, 2.5e-3, 1.25e-3};
    double control_offset = 0.1;
    int nx = 128;
    int ny = 257;
    double gamma = 1.4;
    std::vector<std::pair<double, double>> sobolev_sweep{{0.1, 0.1}, {0.05, 0.05}, {0.025, 0.025}};
    int sobolev_cells = 64;
    int kernel_grid = 512;
    int n_max = 10;
    double positivity_c = 0.1;

    double quad_tol = 1e-13;
    double det_tol = 1e-10;
    double integral_tol = 1e-8;
    double operator_tol = 1e-7;
    double jump_tol = 1e-8;
    double wronskian_tol = 1e-9;
    double symmetry_tol = 1e-9;
    double mu1_tol = 1e-12;
    double level_set_tol = 1e-10;
    double slope_min = 1.8;
    double control_slope_max = 1.2;
    std::optional<double> check_tolerance;  // replaces every residual tolerance when set

    std::string output_dir;  // empty: environment or current directory
};

// Keys of the flat JSON config mirror the field names; unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
void validate(const RunConfig& c);
nlohmann::json to_json(const RunConfig& c);

std::filesystem::path output_dir(const std::string& explicit_dir = {});

}  // namespace pwaves::cli
