#include "delcon/cli.hpp"

#include "delcon/delay_model.hpp"
#include "delcon/dynamics.hpp"
#include "delcon/graph.hpp"
#include "delcon/lyapunov.hpp"
#include "delcon/rendezvous.hpp"
#include "delcon/scenario_io.hpp"
#include "delcon/spectral.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

namespace delcon::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string out_path(const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    return (fs::path(dir) / name).string();
}

std::string vec_to_string(const Eigen::VectorXd& v) {
    std::ostringstream os;
    os << "[";
    for (Eigen::Index i = 0; i < v.size(); ++i)
        os << (i ? ", " : "") << format_real(v(i));
    os << "]";
    return os.str();
}

int cmd_simulate(const std::string& path, std::optional<double> c, const std::string& dir,
                 int stride) {
    Scenario s = load_scenario(path);
    if (c) s.c = *c;
    if (!(s.c > 0.0)) throw ScenarioError("step size must be positive");
    const Eigen::MatrixXd W0 = scenario_w0(s);
    auto [traj, report] = simulate(W0, s.dm, s.c, s.max_steps, s.tol, s.blowup, stride);
    write_text_file(out_path(dir, "trajectory.csv"), trajectory_csv(traj));
    write_text_file(out_path(dir, "report.json"), report_json(report));
    if (report.converged) {
        std::cout << "converged at step " << *report.convergence_step
                  << "; consensus = " << vec_to_string(*report.consensus_vector) << "\n";
        return exit_ok;
    }
    if (report.diverged) {
        std::cout << "diverged" << (report.non_finite ? " (non-finite state)" : "") << "\n";
        return exit_negative;
    }
    std::cout << "did not converge within " << s.max_steps << " steps\n";
    return exit_negative;
}

int cmd_predict(const std::string& path, std::optional<double> c, const std::string& out) {
    Scenario s = load_scenario(path);
    if (c) s.c = *c;
    if (!(s.c > 0.0)) throw ScenarioError("step size must be positive");
    const ConsensusPrediction pred = predict_nonuniform(s.dm, s.c, scenario_w0(s));
    const std::string body = prediction_json(pred);
    if (out.empty())
        std::cout << body;
    else {
        write_text_file(out, body);
        std::cout << "alpha = " << vec_to_string(pred.alpha) << "\n";
    }
    return exit_ok;
}

int cmd_bound(const std::string& path, std::optional<int> d_flag) {
    Scenario s = load_scenario(path);
    int d = 0;
    if (d_flag) {
        d = *d_flag;
    } else {
        // Fall back to the scenario's delays when they are uniform.
        d = -1;
        for (const auto& [i, j] : s.dm.graph.edges) {
            const int t = s.dm.tau(i, j);
            if (d == -1) d = t;
            if (t != d)
                throw ScenarioError(
                    "scenario delays are not uniform; pass --d to pick the delay");
        }
    }
    const RoucheBound rb = rouche_bound(s.dm.graph, d);
    json j;
    j["bound"] = rb.bound;
    j["heuristic"] = rb.heuristic;
    j["d"] = d;
    std::cout << j.dump(2) << "\n";
    return exit_ok;
}

int cmd_lmi_check(const std::string& path, std::optional<double> c, double delta, double eps) {
    Scenario s = load_scenario(path);
    if (c) s.c = *c;
    const FeasibilityVerdict v = lmi_feasible(s.dm, s.c, delta, eps);
    std::cout << verdict_json(v);
    return v.feasible ? exit_ok : exit_negative;
}

int cmd_lmi_search(const std::string& path, double lo, double hi, double tol,
                   const std::string& dir) {
    Scenario s = load_scenario(path);
    const StepSizeCertificate cert = max_step_size(s.dm, lo, hi, tol);
    write_text_file(out_path(dir, "certificate.json"), certificate_json(cert));
    std::cout << "c_max = " << format_real(cert.c_max) << " (tol " << format_real(cert.tol)
              << ", " << cert.probes.size() << " probes)\n";
    return exit_ok;
}

int cmd_sweep(const std::string& path, const std::string& c_list, const std::string& dir) {
    Scenario s = load_scenario(path);
    std::vector<double> cs;
    std::stringstream ss(c_list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        try {
            std::size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            cs.push_back(v);
        } catch (const std::exception&) {
            throw ScenarioError("cannot parse step size '" + tok + "'");
        }
    }
    if (cs.empty()) throw ScenarioError("empty step-size list");
    for (std::size_t i = 0; i < cs.size(); ++i) {
        if (!(cs[i] > 0.0)) throw ScenarioError("step sizes must be positive");
        if (i > 0 && cs[i] <= cs[i - 1])
            throw ScenarioError("step sizes must be strictly increasing");
    }

    const Eigen::MatrixXd W0 = scenario_w0(s);
    json rows = json::array();
    std::string csv = s.dt ? "c,converged,convergence_step,time_seconds,diverged,max_abs_error\n"
                           : "c,converged,convergence_step,diverged,max_abs_error\n";
    bool all_converged = true;

    for (std::size_t i = 0; i < cs.size(); ++i) {
        json row;
        row["c"] = cs[i];
        std::string step_field = "";
        std::string time_field = "";
        std::string err_field = "";
        bool diverged = false;
        try {
            auto [traj, report] = simulate(W0, s.dm, cs[i], s.max_steps, s.tol, s.blowup);
            write_text_file(out_path(dir, "run_" + std::to_string(i) + ".json"),
                            report_json(report));
            const ConsensusPrediction pred = predict_nonuniform(s.dm, cs[i], W0);
            row["converged"] = report.converged;
            row["diverged"] = report.diverged;
            diverged = report.diverged;
            row["predicted_alpha"] = json::array();
            for (Eigen::Index k = 0; k < pred.alpha.size(); ++k)
                row["predicted_alpha"].push_back(pred.alpha(k));
            if (report.converged) {
                row["convergence_step"] = *report.convergence_step;
                step_field = std::to_string(*report.convergence_step);
                if (s.dt) {
                    row["time_seconds"] = *report.convergence_step * *s.dt;
                    time_field = format_real(*report.convergence_step * *s.dt);
                }
                row["alpha"] = json::array();
                for (Eigen::Index k = 0; k < report.consensus_vector->size(); ++k)
                    row["alpha"].push_back((*report.consensus_vector)(k));
                const double err =
                    (*report.consensus_vector - pred.alpha).cwiseAbs().maxCoeff();
                row["max_abs_error"] = err;
                err_field = format_real(err);
            } else {
                all_converged = false;
                row["convergence_step"] = nullptr;
                row["alpha"] = nullptr;
                row["max_abs_error"] = nullptr;
            }
        } catch (const std::exception& e) {
            all_converged = false;
            row["error"] = e.what();
        }
        rows.push_back(row);
        csv += format_real(cs[i]) + "," + (row.value("converged", false) ? "1" : "0") + "," +
               step_field + ",";
        if (s.dt) csv += time_field + ",";
        csv += std::string(diverged ? "1" : "0") + "," + err_field + "\n";
    }

    json summary;
    summary["rows"] = rows;
    write_text_file(out_path(dir, "summary.json"), summary.dump(2) + "\n");
    write_text_file(out_path(dir, "summary.csv"), csv);
    std::cout << (all_converged ? "all runs converged" : "some runs did not converge") << "\n";
    return all_converged ? exit_ok : exit_negative;
}

int cmd_rendezvous(const std::string& path, double duration, double capture_tol,
                   const ControllerGains& gains, std::optional<double> dt_flag, int stride,
                   const std::string& dir) {
    Scenario s = load_scenario(path);
    RendezvousScenario rs;
    rs.dm = s.dm;
    rs.c = s.c;
    rs.gains = gains;
    rs.dt = dt_flag ? *dt_flag : s.dt.value_or(0.02);
    rs.consensus_stride = stride;
    rs.blowup = s.blowup;
    if (s.poses) {
        rs.initial = *s.poses;
    } else {
        // Seeded start poses in the unit square, heading 0.
        std::mt19937_64 eng(s.seed);
        auto unit = [&eng]() { return (eng() >> 11) * 0x1.0p-53; };
        for (int i = 0; i < s.dm.graph.n; ++i) {
            const double x = unit(), y = unit();
            rs.initial.push_back({x, y, 0.0});
        }
    }

    const RendezvousTrace trace = run_rendezvous(rs, duration, capture_tol);
    write_text_file(out_path(dir, "trace.csv"), rendezvous_csv(trace));
    write_text_file(out_path(dir, "summary.json"), rendezvous_summary_json(trace));
    std::cout << (trace.success ? "rendezvous reached" : "rendezvous missed") << "; max terminal error = "
              << format_real(trace.terminal_error.maxCoeff()) << " m\n";
    return trace.success ? exit_ok : exit_negative;
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
    CLI::App app{"delayed-consensus simulator and stability certifier"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = ".";
    std::string out_file;
    std::optional<double> c_flag;
    std::optional<int> d_flag;
    std::optional<double> dt_flag;
    int stride = 1;
    double delta = 1e-6, eps = 1e-10;
    double lo = 0.0, hi = 0.0, tol = 5e-3;
    std::string c_list;
    double duration = 60.0, capture_tol = 0.05;
    ControllerGains gains;

    auto add_scenario = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    };

    CLI::App* sim = app.add_subcommand("simulate", "run the delayed consensus recursion");
    add_scenario(sim);
    sim->add_option("--c", c_flag, "step size override");
    sim->add_option("--out-dir", out_dir, "output directory");
    sim->add_option("--stride", stride, "snapshot stride")->check(CLI::PositiveNumber);

    CLI::App* pre = app.add_subcommand("predict", "closed-form consensus value");
    add_scenario(pre);
    pre->add_option("--c", c_flag, "step size override");
    pre->add_option("--out", out_file, "write JSON here instead of stdout");

    CLI::App* bnd = app.add_subcommand("bound", "closed-form step-size bound (uniform delay)");
    add_scenario(bnd);
    bnd->add_option("--d", d_flag, "uniform delay (default: scenario delays when uniform)");

    CLI::App* chk = app.add_subcommand("lmi-check", "Lyapunov feasibility at one step size");
    add_scenario(chk);
    chk->add_option("--c", c_flag, "step size override");
    chk->add_option("--delta", delta, "candidate-P shift")->check(CLI::PositiveNumber);
    chk->add_option("--eps", eps, "feasibility tolerance")->check(CLI::PositiveNumber);

    CLI::App* sea = app.add_subcommand("lmi-search", "bisect for the largest feasible step size");
    add_scenario(sea);
    sea->add_option("--lo", lo, "feasible bracket endpoint")->required();
    sea->add_option("--hi", hi, "infeasible bracket endpoint")->required();
    sea->add_option("--tol", tol, "bracket width tolerance")->check(CLI::PositiveNumber);
    sea->add_option("--out-dir", out_dir, "output directory");

    CLI::App* swp = app.add_subcommand("sweep", "simulate across a list of step sizes");
    add_scenario(swp);
    swp->add_option("--c-list", c_list, "comma-separated step sizes, increasing")->required();
    swp->add_option("--out-dir", out_dir, "output directory");

    CLI::App* rdv = app.add_subcommand("rendezvous", "drive unicycle agents to consensus");
    add_scenario(rdv);
    rdv->add_option("--duration", duration, "simulated seconds")->check(CLI::PositiveNumber);
    rdv->add_option("--capture-tol", capture_tol, "success radius in meters")
        ->check(CLI::PositiveNumber);
    rdv->add_option("--v-max", gains.v_max, "speed saturation")->check(CLI::PositiveNumber);
    rdv->add_option("--k-dist", gains.k_dist, "sigmoid slope")->check(CLI::PositiveNumber);
    rdv->add_option("--kp", gains.kp, "heading P gain")->check(CLI::PositiveNumber);
    rdv->add_option("--kd", gains.kd, "heading D gain")->check(CLI::PositiveNumber);
    rdv->add_option("--dt", dt_flag, "seconds per control step");
    rdv->add_option("--stride", stride, "control steps per consensus update")
        ->check(CLI::PositiveNumber);
    rdv->add_option("--out-dir", out_dir, "output directory");

    std::vector<const char*> argv;
    argv.push_back("delcon");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        if (sim->parsed()) return cmd_simulate(scenario_path, c_flag, out_dir, stride);
        if (pre->parsed()) return cmd_predict(scenario_path, c_flag, out_file);
        if (bnd->parsed()) return cmd_bound(scenario_path, d_flag);
        if (chk->parsed()) return cmd_lmi_check(scenario_path, c_flag, delta, eps);
        if (sea->parsed()) return cmd_lmi_search(scenario_path, lo, hi, tol, out_dir);
        if (swp->parsed()) return cmd_sweep(scenario_path, c_list, out_dir);
        if (rdv->parsed())
            return cmd_rendezvous(scenario_path, duration, capture_tol, gains, dt_flag, stride,
                                  out_dir);
        return exit_invalid_input;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_invalid_input;
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid_input;
    } catch (const InconclusiveError& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return exit_inconclusive;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid_input;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_negative;
    }
}

int run_command(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_command(args);
}

}  // namespace delcon::cli
