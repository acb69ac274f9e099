#include "pwaves_cli/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>

#include "pwaves/errors.hpp"

namespace pwaves::cli {

namespace {

using nlohmann::json;

template <class T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

RunConfig config_from_json(const json& j) {
    if (!j.is_object()) throw PreconditionError("config: top level must be a JSON object");
    static const char* known[] = {"epsilon", "epsilon_max", "sigmas", "control_offset", "nx", "ny", "gamma",
                                  "sobolev_sweep", "sobolev_cells", "kernel_grid", "n_max", "positivity_c",
                                  "quad_tol", "det_tol", "integral_tol", "operator_tol", "jump_tol",
                                  "wronskian_tol", "symmetry_tol", "mu1_tol", "level_set_tol", "slope_min",
                                  "control_slope_max", "check_tolerance", "output_dir"};
    for (const auto& [k, v] : j.items()) {
        bool ok = false;
        for (const char* name : known) ok = ok || k == name;
        if (!ok) throw PreconditionError("config: unknown key '" + k + "'");
    }
    RunConfig c;
    try {
        read(j, "epsilon", c.epsilon);
        read(j, "epsilon_max", c.epsilon_max);
        read(j, "sigmas", c.sigmas);
        read(j, "control_offset", c.control_offset);
        read(j, "nx", c.nx);
        read(j, "ny", c.ny);
        read(j, "gamma", c.gamma);
        read(j, "sobolev_sweep", c.sobolev_sweep);
        read(j, "sobolev_cells", c.sobolev_cells);
        read(j, "kernel_grid", c.kernel_grid);
        read(j, "n_max", c.n_max);
        read(j, "positivity_c", c.positivity_c);
        read(j, "quad_tol", c.quad_tol);
        read(j, "det_tol", c.det_tol);
        read(j, "integral_tol", c.integral_tol);
        read(j, "operator_tol", c.operator_tol);
        read(j, "jump_tol", c.jump_tol);
        read(j, "wronskian_tol", c.wronskian_tol);
        read(j, "symmetry_tol", c.symmetry_tol);
        read(j, "mu1_tol", c.mu1_tol);
        read(j, "level_set_tol", c.level_set_tol);
        read(j, "slope_min", c.slope_min);
        read(j, "control_slope_max", c.control_slope_max);
        if (j.contains("check_tolerance")) c.check_tolerance = j.at("check_tolerance").get<double>();
        read(j, "output_dir", c.output_dir);
    } catch (const json::exception& e) {
        throw PreconditionError(std::string("config: ") + e.what());
    }
    validate(c);
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("config: cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw PreconditionError("config: " + path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

void validate(const RunConfig& c) {
    auto eps_ok = [&](double e) { return e > 0.0 && e <= c.epsilon_max; };
    if (!(c.epsilon_max > 0.0 && c.epsilon_max < 1.0)) throw PreconditionError("config: epsilon_max must lie in (0,1)");
    if (!eps_ok(c.epsilon)) throw PreconditionError("config: epsilon must lie in (0, epsilon_max]");
    if (c.sigmas.size() < 2) throw PreconditionError("config: need at least two sigmas");
    for (double s : c.sigmas)
        if (!(s > 0.0 && s < 0.5)) throw PreconditionError("config: sigmas must lie in (0, 1/2)");
    for (auto [e, s] : c.sobolev_sweep)
        if (!eps_ok(e) || !(s >= 0.0 && s < 0.5)) throw PreconditionError("config: bad sobolev_sweep entry");
    if (c.sobolev_sweep.size() < 2) throw PreconditionError("config: sobolev_sweep needs two entries");
    if (c.nx < 16 || c.ny < 3) throw PreconditionError("config: need nx >= 16 and ny >= 3");
    if (c.sobolev_cells < 4) throw PreconditionError("config: sobolev_cells must be >= 4");
    if (c.kernel_grid < 8) throw PreconditionError("config: kernel_grid must be >= 8");
    if (c.n_max < 2) throw PreconditionError("config: n_max must be >= 2");
    if (!(c.gamma > 0.0 && c.gamma < 1.5)) throw PreconditionError("config: gamma must lie in (0, 3/2)");
    if (!(c.positivity_c > 0.0 && c.positivity_c <= 0.13)) throw PreconditionError("config: positivity_c must lie in (0, 0.13]");
    for (double t : {c.quad_tol, c.det_tol, c.integral_tol, c.operator_tol, c.jump_tol, c.wronskian_tol,
                     c.symmetry_tol, c.mu1_tol, c.level_set_tol})
        if (!(t > 0.0)) throw PreconditionError("config: tolerances must be positive");
    if (c.check_tolerance && !(*c.check_tolerance > 0.0))
        throw PreconditionError("config: check_tolerance must be positive");
}

nlohmann::json to_json(const RunConfig& c) {
    json j = {{"epsilon", c.epsilon},
              {"epsilon_max", c.epsilon_max},
              {"sigmas", c.sigmas},
              {"control_offset", c.control_offset},
              {"nx", c.nx},
              {"ny", c.ny},
              {"gamma", c.gamma},
              {"sobolev_sweep", c.sobolev_sweep},
              {"sobolev_cells", c.sobolev_cells},
              {"kernel_grid", c.kernel_grid},
              {"n_max", c.n_max},
              {"positivity_c", c.positivity_c},
              {"quad_tol", c.quad_tol},
              {"det_tol", c.det_tol},
              {"integral_tol", c.integral_tol},
              {"operator_tol", c.operator_tol},
              {"jump_tol", c.jump_tol},
              {"wronskian_tol", c.wronskian_tol},
              {"symmetry_tol", c.symmetry_tol},
              {"mu1_tol", c.mu1_tol},
              {"level_set_tol", c.level_set_tol},
              {"slope_min", c.slope_min},
              {"control_slope_max", c.control_slope_max}};
    if (c.check_tolerance) j["check_tolerance"] = *c.check_tolerance;
    return j;
}

std::filesystem::path output_dir(const std::string& explicit_dir) {
    if (!explicit_dir.empty()) return explicit_dir;
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
    return ".";
}

}  // namespace pwaves::cli
