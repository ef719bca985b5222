#include "delcon/scenario_io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace delcon {

using nlohmann::json;

namespace {

// Line number of a byte offset, for parse errors.
std::size_t line_of(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

[[noreturn]] void field_error(const std::string& origin, const std::string& field,
                              const std::string& what) {
    throw ScenarioError(origin + ": field '" + field + "': " + what);
}

// `field` is the dotted path used in error messages; the lookup key is its
// last component so nested objects report their full location.
const json& require(const json& obj, const std::string& origin, const std::string& field) {
    const auto dot = field.rfind('.');
    const std::string key = dot == std::string::npos ? field : field.substr(dot + 1);
    auto it = obj.find(key);
    if (it == obj.end()) field_error(origin, field, "missing");
    return *it;
}

double as_real(const json& j, const std::string& origin, const std::string& field) {
    if (!j.is_number()) field_error(origin, field, "expected a number");
    return j.get<double>();
}

long as_int(const json& j, const std::string& origin, const std::string& field) {
    if (!j.is_number_integer()) field_error(origin, field, "expected an integer");
    return j.get<long>();
}

Eigen::MatrixXd as_matrix(const json& j, const std::string& origin, const std::string& field) {
    if (!j.is_array() || j.empty()) field_error(origin, field, "expected a non-empty 2-d array");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) field_error(origin, field, "expected a non-empty 2-d array");
    Eigen::MatrixXd M(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            field_error(origin, field, "ragged rows");
        for (std::size_t c = 0; c < cols; ++c) {
            if (!j[r][c].is_number()) field_error(origin, field, "expected numeric entries");
            M(r, c) = j[r][c].get<double>();
        }
    }
    return M;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(origin + ":" + std::to_string(line_of(text, e.byte)) + ": " +
                            e.what());
    }
    if (!root.is_object()) throw ScenarioError(origin + ": top level must be an object");

    const json& jg = require(root, origin, "graph");
    if (!jg.is_object()) field_error(origin, "graph", "expected an object");
    const int n = static_cast<int>(as_int(require(jg, origin, "graph.n"), origin, "graph.n"));
    const json& je = require(jg, origin, "graph.edges");
    if (!je.is_array()) field_error(origin, "graph.edges", "expected an array of pairs");
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : je) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
            !e[1].is_number_integer())
            field_error(origin, "graph.edges", "each edge must be a pair of integers");
        edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }

    const Eigen::MatrixXd tau_real = as_matrix(require(root, origin, "tau"), origin, "tau");
    Eigen::MatrixXi tau(tau_real.rows(), tau_real.cols());
    for (Eigen::Index r = 0; r < tau_real.rows(); ++r)
        for (Eigen::Index c = 0; c < tau_real.cols(); ++c) {
            const double v = tau_real(r, c);
            if (v != std::floor(v) || v < 0)
                field_error(origin, "tau", "delays must be nonnegative integers");
            tau(r, c) = static_cast<int>(v);
        }

    Scenario s;
    try {
        s.dm = make_delay_model(from_edges(n, edges), tau);
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(origin + ": " + e.what());
    }

    s.c = as_real(require(root, origin, "c"), origin, "c");
    if (!(s.c > 0.0)) field_error(origin, "c", "must be positive");

    if (root.contains("W0")) {
        Eigen::MatrixXd W0 = as_matrix(root["W0"], origin, "W0");
        if (W0.rows() != n || W0.cols() != n)
            field_error(origin, "W0", "must be " + std::to_string(n) + "x" + std::to_string(n));
        s.W0 = std::move(W0);
    }
    if (root.contains("max_steps")) {
        s.max_steps = as_int(root["max_steps"], origin, "max_steps");
        if (s.max_steps < 1) field_error(origin, "max_steps", "must be >= 1");
    }
    if (root.contains("tol")) {
        s.tol = as_real(root["tol"], origin, "tol");
        if (!(s.tol > 0.0)) field_error(origin, "tol", "must be positive");
    }
    if (root.contains("blowup")) {
        s.blowup = as_real(root["blowup"], origin, "blowup");
        if (!(s.blowup > 1.0)) field_error(origin, "blowup", "must exceed 1");
    }
    if (root.contains("seed")) {
        const long seed = as_int(root["seed"], origin, "seed");
        if (seed < 0) field_error(origin, "seed", "must be >= 0");
        s.seed = static_cast<std::uint64_t>(seed);
    }
    if (root.contains("dt")) {
        s.dt = as_real(root["dt"], origin, "dt");
        if (!(*s.dt > 0.0)) field_error(origin, "dt", "must be positive");
    }
    if (root.contains("poses")) {
        const json& jp = root["poses"];
        if (!jp.is_array() || jp.size() != static_cast<std::size_t>(n))
            field_error(origin, "poses", "expected " + std::to_string(n) + " [x, y, theta] rows");
        std::vector<Pose> poses;
        for (const auto& row : jp) {
            if (!row.is_array() || row.size() != 3 || !row[0].is_number() ||
                !row[1].is_number() || !row[2].is_number())
                field_error(origin, "poses", "each pose must be [x, y, theta]");
            poses.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
        }
        s.poses = std::move(poses);
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError(path + ": cannot open scenario file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path);
}

Eigen::MatrixXd seeded_w0(int n, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    // Fixed engine-to-[0,1) mapping so every platform draws identical values.
    auto unit = [&eng]() { return (eng() >> 11) * 0x1.0p-53; };
    Eigen::MatrixXd W(n, n);
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            W(i, j) = unit();
            sum += W(i, j);
        }
        W.row(i) /= sum;
    }
    return W;
}

Eigen::MatrixXd scenario_w0(const Scenario& s) {
    return s.W0 ? *s.W0 : seeded_w0(s.dm.graph.n, s.seed);
}

std::string format_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "step,agent,component,value\n";
    for (const auto& [step, W] : traj.snapshots)
        for (Eigen::Index i = 0; i < W.rows(); ++i)
            for (Eigen::Index j = 0; j < W.cols(); ++j)
                out += std::to_string(step) + "," + std::to_string(i + 1) + "," +
                       std::to_string(j + 1) + "," + format_real(W(i, j)) + "\n";
    return out;
}

namespace {

json vector_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string report_json(const ConvergenceReport& report) {
    json j;
    j["converged"] = report.converged;
    j["convergence_step"] =
        report.convergence_step ? json(*report.convergence_step) : json(nullptr);
    j["diverged"] = report.diverged;
    j["consensus"] =
        report.consensus_vector ? vector_json(*report.consensus_vector) : json(nullptr);
    j["spread_final"] = vector_json(column_spread(report.final_W));
    return dump(j);
}

std::string certificate_json(const StepSizeCertificate& cert) {
    json j;
    j["c_max"] = cert.c_max;
    j["tol"] = cert.tol;
    json probes = json::array();
    for (const auto& p : cert.probes)
        probes.push_back(
            {{"c", p.c}, {"feasible", p.feasible}, {"method", p.method}, {"witness", p.witness}});
    j["probes"] = probes;
    return dump(j);
}

std::string verdict_json(const FeasibilityVerdict& verdict) {
    json j;
    j["feasible"] = verdict.feasible;
    j["method"] = verdict.method;
    j["witness"] = verdict.witness;
    j["iterations"] = verdict.iterations;
    return dump(j);
}

std::string prediction_json(const ConsensusPrediction& prediction) {
    json j;
    j["alpha"] = vector_json(prediction.alpha);
    j["weights"] = vector_json(prediction.weights);
    return dump(j);
}

std::string mode_report_json(const ModeStabilityReport& report) {
    json modes = json::array();
    for (const auto& m : report.modes) {
        json roots = json::array();
        for (const auto& r : m.roots)
            roots.push_back({{"re", r.real()}, {"im", r.imag()}, {"mag", std::abs(r)}});
        modes.push_back({{"lambda_L", m.lambda_L},
                         {"delta_i", m.delta_i},
                         {"coeffs", m.coeffs},
                         {"roots", roots}});
    }
    json j;
    j["modes"] = modes;
    j["verdict"] = report.stable ? "stable" : "unstable";
    j["regular"] = report.regular;
    return dump(j);
}

std::string rendezvous_csv(const RendezvousTrace& trace) {
    std::string out = "t,agent,x,y,theta,ref_x,ref_y,v,omega\n";
    for (const auto& r : trace.rows)
        out += format_real(r.t) + "," + std::to_string(r.agent) + "," + format_real(r.pose.x) +
               "," + format_real(r.pose.y) + "," + format_real(r.pose.theta) + "," +
               format_real(r.ref_x) + "," + format_real(r.ref_y) + "," + format_real(r.v) + "," +
               format_real(r.omega) + "\n";
    return out;
}

std::string rendezvous_summary_json(const RendezvousTrace& trace) {
    json j;
    j["success"] = trace.success;
    j["predicted"] = {trace.predicted.x(), trace.predicted.y()};
    j["achieved"] = {trace.achieved.x(), trace.achieved.y()};
    j["terminal_error"] = vector_json(trace.terminal_error);
    j["final_reference_spread"] = trace.final_reference_spread;
    return dump(j);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << content;
    if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace delcon
