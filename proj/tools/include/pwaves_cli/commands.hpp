#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

#include "pwaves/wave.hpp"
#include "pwaves_cli/config.hpp"
#include "pwaves_cli/report.hpp"

namespace pwaves::cli {

// Entry point shared by the executable and the tests. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

nlohmann::json solve_report(double epsilon, double epsilon_max = kDefaultEpsilonMax);
// Header plus one row; every cell is the JSON serialization of the same number.
std::string solve_csv(const nlohmann::json& report);

struct SweepResult {
    std::string csv;
    int failures = 0;
};
SweepResult sweep_table(std::span<const double> epsilons, int n_max, double epsilon_max = kDefaultEpsilonMax);

VerificationReport verify_suite(const RunConfig& config);

// CSV `x,y,omega,psi` (x-major) and a JSON sidecar next to it.
void write_field(const WaveField& field, const std::filesystem::path& csv, const std::filesystem::path& sidecar);
std::filesystem::path sidecar_path(const std::filesystem::path& csv);

}  // namespace pwaves::cli
