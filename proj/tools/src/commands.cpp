#include "pwaves_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <numbers>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "pwaves/errors.hpp"
#include "pwaves/greens.hpp"
#include "pwaves/kernel.hpp"
#include "pwaves/spectra.hpp"

namespace pwaves::cli {

namespace {

using nlohmann::json;

std::string num(double v) { return json(v).dump(); }

KernelOptions kernel_options(double epsilon_max, double quad_tol = 1e-13) {
    KernelOptions o;
    o.epsilon_max = epsilon_max;
    o.quad_tol = quad_tol;
    return o;
}

void check_epsilon(double e, double epsilon_max) {
    if (!(e > 0.0 && e <= epsilon_max)) {
        std::ostringstream os;
        os << "precondition violated: epsilon must lie in (0, " << epsilon_max << "], got " << e;
        throw PreconditionError(os.str());
    }
}

const char* const kSolveColumns[] = {"epsilon",        "mu1",          "mu_tilde_star",   "mu2_empirical",
                                     "lambda_star",    "A",            "B",               "residual_integral",
                                     "residual_jump",  "residual_det", "window_lo",       "window_hi"};

double solve_field(const json& r, const std::string& col) {
    if (col.rfind("residual_", 0) == 0) return r.at("residuals").at(col.substr(9)).get<double>();
    if (col == "window_lo") return r.at("window").at("lo").get<double>();
    if (col == "window_hi") return r.at("window").at("hi").get<double>();
    return r.at(col).get<double>();
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw PreconditionError("cannot write " + p.string());
    f << text;
    if (!f) throw SolverError("write failed: " + p.string());
}

template <class F>
void guarded(VerificationReport& rep, const std::string& name, const std::string& anchor, F&& body) {
    try {
        body();
    } catch (const std::exception& e) {
        rep.add_failure(name, anchor, e.what());
    }
}

}  // namespace

json solve_report(double epsilon, double epsilon_max) {
    check_epsilon(epsilon, epsilon_max);
    const KernelMode mode = assemble_kernel_mode(epsilon, kernel_options(epsilon_max));
    const Window w = mu_tilde_window(epsilon);
    const JumpCheck jc = cross_check_jump(1, epsilon, mode.mu_tilde_star());
    return {{"epsilon", epsilon},
            {"mu1", mode.mu1()},
            {"mu_tilde_star", mode.mu_tilde_star()},
            {"mu2_empirical", mode.mu2_empirical()},
            {"lambda_star", mode.lambda_star()},
            {"A", mode.A()},
            {"B", mode.B()},
            {"residuals",
             {{"integral", integral_residual(mode)}, {"jump", std::abs(jc.diff)}, {"det", std::abs(mode.det())}}},
            {"window", {{"lo", w.lo}, {"hi", w.hi}}}};
}

std::string solve_csv(const json& r) {
    std::string head, row;
    for (const char* c : kSolveColumns) {
        head += (head.empty() ? "" : ",") + std::string(c);
        row += (row.empty() ? "" : ",") + num(solve_field(r, c));
    }
    return head + "\n" + row + "\n";
}

SweepResult sweep_table(std::span<const double> epsilons, int n_max, double epsilon_max) {
    if (epsilons.size() < 2) throw PreconditionError("sweep: need at least two epsilon values");
    if (n_max < 2) throw PreconditionError("sweep: n_max must be >= 2");
    for (double e : epsilons) check_epsilon(e, epsilon_max);
    SweepResult res;
    std::string head = "epsilon,mu_tilde,mu1_scaled,(mu_tilde-0.5)/eps,lambda_star";
    for (int n = 2; n <= n_max; ++n) head += ",det" + std::to_string(n);
    head += ",supd,supd_ratio,status\n";
    res.csv = head;
    auto row_for = [n_max, epsilon_max](double e) -> std::pair<std::string, bool> {
        std::string row = num(e);
        try {
            const KernelMode mode = assemble_kernel_mode(e, kernel_options(epsilon_max));
            const double mt = mode.mu_tilde_star(), q = (mt - 0.5) / e;
            std::string cells = "," + num(mt) + "," + num(q - 0.5) + "," + num(q) + "," + num(mode.lambda_star());
            for (int n = 2; n <= n_max; ++n) cells += "," + num(determinant(n, e, mt));
            const double supd = std::max(difference_to_limit(e, mode.f_left()).sup,
                                         difference_to_limit(e, mode.f_right()).sup);
            cells += "," + num(supd) + "," + num(supd / (e * std::log(1.0 / e))) + ",ok";
            return {row + cells, true};
        } catch (const std::exception& ex) {
            std::string msg = ex.what();
            std::replace(msg.begin(), msg.end(), ',', ';');
            std::replace(msg.begin(), msg.end(), '\n', ' ');
            return {row + std::string(n_max + 5, ',') + "failed: " + msg, false};
        }
    };
    // rows are computed concurrently and written in input order
    std::vector<std::future<std::pair<std::string, bool>>> rows;
    for (double e : epsilons) rows.push_back(std::async(std::launch::async, row_for, e));
    for (auto& r : rows) {
        auto [row, ok] = r.get();
        if (!ok) ++res.failures;
        res.csv += row + "\n";
    }
    return res;
}

VerificationReport verify_suite(const RunConfig& c) {
    validate(c);
    VerificationReport rep;
    const double* ov = c.check_tolerance ? &*c.check_tolerance : nullptr;
    const double e = c.epsilon;

    guarded(rep, "profile.boundary_value", "stream function boundary values 0 and -1/3", [&] {
        const ShearProfile p(e, c.epsilon_max);
        rep.add_residual("profile.boundary_value", p.psi0(1.0) + 1.0 / 3.0, 1e-14, "stream function boundary values 0 and -1/3", ov);
        double margin = INFINITY;
        for (int i = 0; i < 1000; ++i)
            margin = std::min(margin, p.psi0_prime(i / 1000.0) - p.psi0_prime((i + 1) / 1000.0));
        rep.add("profile.velocity_decreasing", margin, Comparison::gt, 0.0, "strict decrease of the shear velocity");
    });

    guarded(rep, "greens.distributional", "Green's function of d^2/dy^2 - n^2", [&] {
        const double pi = std::numbers::pi, z = 0.3;
        const double v = greens_distributional_check(
            2, z, [pi](double y) { return std::sin(pi * y); }, [pi](double y) { return -pi * pi * std::sin(pi * y); });
        rep.add_residual("greens.distributional", v + std::sin(pi * z), 1e-10, "Green's function of d^2/dy^2 - n^2", ov);
    });

    guarded(rep, "limit.mu1_residual", "first-order coefficient of the speed expansion", [&] {
        const Mu1Solution m = solve_mu1();
        rep.add_residual("limit.mu1_residual", m.residual, c.mu1_tol, "first-order coefficient of the speed expansion", ov);
        rep.add("limit.mu1_bound", std::abs(m.mu1), Comparison::lt, 0.5, "mu1 lies in (-1/2, 1/2)");
    });

    std::optional<KernelMode> mode;
    guarded(rep, "kernel.determinant", "dispersion relation det = 0", [&] {
        mode.emplace(assemble_kernel_mode(e, kernel_options(c.epsilon_max, c.quad_tol)));
        rep.add_residual("kernel.determinant", mode->det(), c.det_tol, "dispersion relation det = 0", ov);
        const SpectralParams& p = mode->params();
        rep.add("kernel.mu_tilde_above_half", p.mu_tilde - 0.5, Comparison::gt, 0.0, "mu_tilde > 1/2");
        rep.add("kernel.nu_tilde_below_half", 0.5 - p.nu_tilde, Comparison::gt, 0.0, "nu_tilde < 1/2");
        const Window w = mode->profile().admissible_window();
        rep.add("kernel.lambda_bar_in_window", std::min(p.lambda_bar - w.lo, w.hi - p.lambda_bar), Comparison::gt, 0.0,
                "lambda_bar inside (a^2, b^2 - eps^2)");
    });
    if (!mode) return rep;
    const KernelMode& m = *mode;
    const ShearProfile& prof = m.profile();

    guarded(rep, "ode.wronskian_drift", "constant Wronskian of the Frobenius pair", [&] {
        const double s = m.mu_tilde_star(), k = 1.0 - e;
        const auto [g1, g2] = frobenius_pair(s, k);
        const double w0 = wronskian(g1, g2, s + 0.1 * s);
        double drift = 0.0;
        for (int i = 1; i <= 9; ++i)
            for (double sg : {-1.0, 1.0}) drift = std::max(drift, std::abs(wronskian(g1, g2, s + sg * 0.1 * i * s) - w0));
        rep.add_residual("ode.wronskian_drift", drift / std::abs(w0), c.wronskian_tol, "constant Wronskian of the Frobenius pair", ov);
    });

    guarded(rep, "kernel.integral_residual", "kernel integral equations on both bands", [&] {
        rep.add_residual("kernel.integral_residual", integral_residual(m, c.kernel_grid, c.quad_tol), c.integral_tol,
                         "kernel integral equations on both bands", ov);
    });

    guarded(rep, "kernel.operator_residual", "L h = 0 at the bifurcation speed", [&] {
        const auto y = band_grid(prof, c.kernel_grid);
        const auto lh = linear_operator_apply(prof, m.lambda_star(), [&m](double z) { return m.h(z); }, 1, y);
        double sup = 0.0;
        for (double v : lh) sup = std::max(sup, std::abs(v));
        rep.add_residual("kernel.operator_residual", sup, c.operator_tol, "L h = 0 at the bifurcation speed", ov);
    });

    for (int n = 1; n <= 3; ++n) {
        const std::string name = "kernel.jump_identity_n" + std::to_string(n);
        guarded(rep, name, "jump identity for (I1+I2)/C_n", [&] {
            rep.add_residual(name, cross_check_jump(n, e, m.mu_tilde_star(), c.quad_tol).diff, c.jump_tol,
                             "jump identity for (I1+I2)/C_n", ov);
        });
    }

    guarded(rep, "kernel.operator_symmetry", "symmetry of the linearized operator", [&] {
        auto h = [](double y) { return std::sin(std::numbers::pi * y) * (1.0 + y); };
        auto g = [](double y) { return y * (1.0 - y) * std::exp(y); };
        const double l = m.lambda_star();
        const double hg = operator_inner(prof, l, h, g, 1), gh = operator_inner(prof, l, g, h, 1);
        rep.add_residual("kernel.operator_symmetry", (hg - gh) / std::max(std::abs(hg), std::abs(gh)), c.symmetry_tol,
                         "symmetry of the linearized operator", ov);
    });

    guarded(rep, "spectra.positivity", "lower bound f >= c sinh(k d)/k", [&] {
        const auto l = positivity_bound(m.f_left(), c.positivity_c), r = positivity_bound(m.f_right(), c.positivity_c);
        rep.add("spectra.positivity_left", l.positive ? l.worst_ratio : -1.0, Comparison::ge, c.positivity_c,
                "lower bound f >= c sinh(k x)/k on the left half");
        rep.add("spectra.positivity_right", r.positive ? r.worst_ratio : -1.0, Comparison::ge, c.positivity_c,
                "lower bound f >= c sinh(k (1-x))/k on the right half");
    });

    guarded(rep, "spectra.monotonicity", "f_1 > f_2 > ... > f_5 inside each half", [&] {
        const int ns[] = {1, 2, 3, 4, 5};
        const auto r = monotonicity_check(e, m.mu_tilde_star(), ns);
        rep.add("spectra.monotonicity", r.worst_margin, Comparison::gt, 0.0, "f_1 > f_2 > ... > f_5 inside each half");
        rep.add("spectra.left_derivative_order", r.left_derivative_margin, Comparison::gt, 0.0,
                "f_1'(1/2-) < f_2'(1/2-)");
    });

    guarded(rep, "spectra.det_n_positive", "det_n > 0 for n >= 2", [&] {
        const auto r = one_dim_check(e, m.mu_tilde_star(), c.n_max, c.quad_tol);
        double mn = INFINITY;
        for (const auto& rec : r.modes) mn = std::min(mn, rec.det);
        rep.add("spectra.det_n_positive", mn, Comparison::gt, 0.0, "det_n > 0 for n >= 2");
        rep.add("spectra.gap_left_negative", -r.delta_left, Comparison::lt, 0.0, "(f_1 - f_2)'(1/2-) < 0");
        rep.add("spectra.gap_right_positive", r.delta_right, Comparison::gt, 0.0, "(f_1 - f_2)'(1/2+) > 0");
    });

    guarded(rep, "wave.level_set", "omega(x, y + f(x,y)) = varpi(y)", [&] {
        const Displacement d(m, c.sigmas.front());
        std::mt19937_64 rng(20240531);
        std::uniform_real_distribution<double> ux(0.0, 2.0 * std::numbers::pi), uy(0.0, 1.0);
        double err = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double x = ux(rng), t = uy(rng);
            const double y = i % 2 == 0 ? t * prof.a() : prof.b() + t * (1.0 - prof.b());
            err = std::max(err, std::abs(pushed_vorticity(d, x, y + d(x, y)) - prof.varpi(y)));
        }
        rep.add_residual("wave.level_set", err, c.level_set_tol, "omega(x, y + f(x,y)) = varpi(y)", ov);
    });

    guarded(rep, "wave.residual_slope", "quadratic vanishing of the level-set residual", [&] {
        ResidualOptions o;
        o.nx = c.nx;
        o.ny = c.ny;
        const auto s = residual_scaling(m, c.sigmas, c.control_offset, o);
        rep.add("wave.residual_slope", s.slope, Comparison::ge, c.slope_min, "quadratic vanishing of the level-set residual");
        rep.add("wave.control_slope", s.control_slope, Comparison::le, c.control_slope_max,
                "linear residual away from the bifurcation speed");
    });

    guarded(rep, "wave.sobolev_trend", "H^gamma distance to Poiseuille shrinks with (eps, sigma)", [&] {
        SobolevOptions so;
        so.cells = c.sobolev_cells;
        double prev = INFINITY, worst = 0.0;
        for (auto [eps, sig] : c.sobolev_sweep) {
            const KernelMode k = assemble_kernel_mode(eps, kernel_options(c.epsilon_max, c.quad_tol));
            const double d = sobolev_distance(push_forward_vorticity(k, sig, 16, 3), c.gamma, so).total;
            if (std::isfinite(prev)) worst = std::max(worst, d / prev);
            prev = d;
        }
        rep.add("wave.sobolev_trend", worst, Comparison::lt, 1.0, "H^gamma distance to Poiseuille shrinks with (eps, sigma)");
    });

    return rep;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
    std::filesystem::path p = csv;
    return p.replace_extension(".json");
}

void write_field(const WaveField& w, const std::filesystem::path& csv, const std::filesystem::path& sidecar) {
    if (w.psi.empty()) throw PreconditionError("write_field: stream function not solved");
    std::string text = "x,y,omega,psi\n";
    for (int i = 0; i < w.nx; ++i)
        for (int j = 0; j < w.ny; ++j)
            text += num(w.x[i]) + "," + num(w.y[j]) + "," + num(w.omega_ij(i, j)) + "," + num(w.psi_ij(i, j)) + "\n";
    write_text(csv, text);
    const json meta = {{"epsilon", w.epsilon}, {"sigma", w.sigma}, {"lambda_star", w.lambda},
                       {"mu_tilde", w.mu_tilde}, {"nx", w.nx}, {"ny", w.ny}};
    write_text(sidecar, meta.dump(2) + "\n");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"First-order traveling waves near Poiseuille flow"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "0.1.0");

    double epsilon = 0.05, epsilon_max = kDefaultEpsilonMax;
    app.add_option("--epsilon-max", epsilon_max, "Upper bound on admissible epsilon")->capture_default_str();

    auto* solve = app.add_subcommand("solve", "Solve the dispersion problem at one epsilon");
    solve->add_option("--epsilon", epsilon, "Plateau width")->required();
    bool as_json = false, as_csv = false;
    auto* jf = solve->add_flag("--json", as_json, "JSON output (default)");
    auto* cf = solve->add_flag("--csv", as_csv, "CSV output");
    jf->excludes(cf);

    auto* sweep = app.add_subcommand("sweep", "Tabulate the dispersion data over several epsilon values");
    std::vector<double> epsilons;
    std::string sweep_out;
    int sweep_nmax = 10;
    sweep->add_option("--epsilons", epsilons, "Comma-separated epsilon list")->required()->delimiter(',');
    sweep->add_option("--out", sweep_out, "Output directory");
    sweep->add_option("--n-max", sweep_nmax, "Largest mode in the det columns")->capture_default_str();

    auto* verify = app.add_subcommand("verify", "Run the invariant suite");
    std::string config_file, verify_out;
    std::optional<double> v_eps, v_tol;
    std::optional<int> v_nx, v_ny, v_nmax;
    verify->add_option("--config", config_file, "Flat JSON config")->check(CLI::ExistingFile);
    verify->add_option("--epsilon", v_eps, "Override epsilon");
    verify->add_option("--nx", v_nx, "Override residual grid columns");
    verify->add_option("--ny", v_ny, "Override residual grid rows");
    verify->add_option("--n-max", v_nmax, "Override largest checked mode");
    verify->add_option("--check-tolerance", v_tol, "Replace every residual tolerance");
    verify->add_option("--out", verify_out, "Output directory for verify_report.json");

    auto* field = app.add_subcommand("field", "Export the first-order wave field");
    double sigma = 0.0;
    int nx = 128, ny = 129;
    std::string field_out;
    field->add_option("--epsilon", epsilon, "Plateau width")->required();
    field->add_option("--sigma", sigma, "Amplitude")->required();
    field->add_option("--nx", nx, "Columns on the torus")->capture_default_str();
    field->add_option("--ny", ny, "Rows on [-1,1]")->capture_default_str();
    field->add_option("--out", field_out, "CSV path (sidecar written next to it)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*solve) {
            check_epsilon(epsilon, epsilon_max);
            json r;
            try {
                r = solve_report(epsilon, epsilon_max);
            } catch (const SolverError& e) {
                out << json{{"error", "solver_failure"}, {"epsilon", epsilon}, {"message", e.what()}}.dump(2) << "\n";
                return kExitSolver;
            }
            out << (as_csv ? solve_csv(r) : r.dump(2) + "\n");
            return kExitOk;
        }
        if (*sweep) {
            const SweepResult s = sweep_table(epsilons, sweep_nmax, epsilon_max);
            const auto path = output_dir(sweep_out) / "sweep.csv";
            write_text(path, s.csv);
            out << path.string() << "\n";
            return s.failures ? kExitSolver : kExitOk;
        }
        if (*verify) {
            RunConfig c = config_file.empty() ? RunConfig{} : load_config(config_file);
            if (v_eps) c.epsilon = *v_eps;
            if (v_nx) c.nx = *v_nx;
            if (v_ny) c.ny = *v_ny;
            if (v_nmax) c.n_max = *v_nmax;
            if (v_tol) c.check_tolerance = *v_tol;
            if (!verify_out.empty()) c.output_dir = verify_out;
            validate(c);
            const VerificationReport rep = verify_suite(c);
            json j = rep.to_json();
            j["config"] = to_json(c);
            const std::string text = j.dump(2) + "\n";
            write_text(output_dir(c.output_dir) / "verify_report.json", text);
            out << text;
            return rep.overall_pass() ? kExitOk : kExitVerify;
        }
        if (*field) {
            check_epsilon(epsilon, epsilon_max);
            const std::filesystem::path csv = field_out.empty() ? output_dir() / "field.csv" : std::filesystem::path(field_out);
            if (csv.extension() == ".json") throw PreconditionError("field: --out must not end in .json");
            const KernelMode mode = assemble_kernel_mode(epsilon, kernel_options(epsilon_max));
            const WaveField w = assemble_wave_field(mode, sigma, nx, ny);
            write_field(w, csv, sidecar_path(csv));
            out << csv.string() << "\n";
            return kExitOk;
        }
    } catch (const PreconditionError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitUsage;
}

}  // namespace pwaves::cli
