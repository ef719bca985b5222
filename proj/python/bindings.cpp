#include "delcon/delay_model.hpp"
#include "delcon/dynamics.hpp"
#include "delcon/graph.hpp"
#include "delcon/lyapunov.hpp"
#include "delcon/rendezvous.hpp"
#include "delcon/scenario_io.hpp"
#include "delcon/spectral.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace delcon;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Delayed multi-agent consensus: simulation, closed-form prediction, "
              "and stability certification";

    py::register_exception<InconclusiveError>(m, "InconclusiveError");
    py::register_exception<ScenarioError>(m, "ScenarioError");

    py::class_<Graph>(m, "Graph")
        .def_readonly("n", &Graph::n)
        .def_readonly("edges", &Graph::edges)
        .def("adjacency", &Graph::adjacency)
        .def("degrees", &Graph::degrees);

    py::class_<GraphStats>(m, "GraphStats")
        .def_readonly("max_degree", &GraphStats::max_degree)
        .def_readonly("avg_degree", &GraphStats::avg_degree)
        .def_readonly("edge_count", &GraphStats::edge_count)
        .def_readonly("connected", &GraphStats::connected)
        .def_readonly("regular_degree", &GraphStats::regular_degree);

    py::class_<SpectralDecomposition>(m, "SpectralDecomposition")
        .def_readonly("eigenvalues", &SpectralDecomposition::eigenvalues)
        .def_readonly("eigenvectors", &SpectralDecomposition::eigenvectors);

    py::class_<DelayModel>(m, "DelayModel")
        .def_readonly("graph", &DelayModel::graph)
        .def_readonly("tau", &DelayModel::tau)
        .def_readonly("tau_max", &DelayModel::tau_max);

    py::class_<DelayAggregates>(m, "DelayAggregates")
        .def_readonly("psi", &DelayAggregates::psi)
        .def_readonly("total_edge_delay", &DelayAggregates::total_edge_delay);

    py::class_<StateHistory>(m, "StateHistory")
        .def_readonly("frames", &StateHistory::frames)
        .def_readonly("k", &StateHistory::k);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("snapshots", &Trajectory::snapshots)
        .def_readonly("spread_series", &Trajectory::spread_series)
        .def_readonly("stride", &Trajectory::stride);

    py::class_<ConvergenceReport>(m, "ConvergenceReport")
        .def_readonly("converged", &ConvergenceReport::converged)
        .def_readonly("convergence_step", &ConvergenceReport::convergence_step)
        .def_readonly("final_W", &ConvergenceReport::final_W)
        .def_readonly("consensus_vector", &ConvergenceReport::consensus_vector)
        .def_readonly("diverged", &ConvergenceReport::diverged)
        .def_readonly("non_finite", &ConvergenceReport::non_finite);

    py::class_<AugmentedSystem>(m, "AugmentedSystem")
        .def_readonly("A", &AugmentedSystem::A)
        .def_readonly("n", &AugmentedSystem::n)
        .def_readonly("tau_max", &AugmentedSystem::tau_max)
        .def_readonly("c", &AugmentedSystem::c);

    py::class_<LeftEigenvector>(m, "LeftEigenvector")
        .def_readonly("v", &LeftEigenvector::v)
        .def_readonly("beta", &LeftEigenvector::beta);

    py::class_<ConsensusPrediction>(m, "ConsensusPrediction")
        .def_readonly("alpha", &ConsensusPrediction::alpha)
        .def_readonly("weights", &ConsensusPrediction::weights);

    py::class_<RoucheBound>(m, "RoucheBound")
        .def_readonly("bound", &RoucheBound::bound)
        .def_readonly("heuristic", &RoucheBound::heuristic);

    py::class_<ModeReport>(m, "ModeReport")
        .def_readonly("lambda_L", &ModeReport::lambda_L)
        .def_readonly("delta_i", &ModeReport::delta_i)
        .def_readonly("coeffs", &ModeReport::coeffs)
        .def_readonly("roots", &ModeReport::roots);

    py::class_<ModeStabilityReport>(m, "ModeStabilityReport")
        .def_readonly("modes", &ModeStabilityReport::modes)
        .def_readonly("stable", &ModeStabilityReport::stable)
        .def_readonly("regular", &ModeStabilityReport::regular);

    py::class_<LyapunovCandidate>(m, "LyapunovCandidate")
        .def_readonly("P", &LyapunovCandidate::P)
        .def_readonly("delta", &LyapunovCandidate::delta);

    py::class_<FeasibilityVerdict>(m, "FeasibilityVerdict")
        .def_readonly("feasible", &FeasibilityVerdict::feasible)
        .def_readonly("method", &FeasibilityVerdict::method)
        .def_readonly("witness", &FeasibilityVerdict::witness)
        .def_readonly("iterations", &FeasibilityVerdict::iterations);

    py::class_<StepSizeCertificate::Probe>(m, "StepSizeProbe")
        .def_readonly("c", &StepSizeCertificate::Probe::c)
        .def_readonly("feasible", &StepSizeCertificate::Probe::feasible)
        .def_readonly("method", &StepSizeCertificate::Probe::method)
        .def_readonly("witness", &StepSizeCertificate::Probe::witness);

    py::class_<StepSizeCertificate>(m, "StepSizeCertificate")
        .def_readonly("c_max", &StepSizeCertificate::c_max)
        .def_readonly("tol", &StepSizeCertificate::tol)
        .def_readonly("probes", &StepSizeCertificate::probes);

    py::class_<Pose>(m, "Pose")
        .def(py::init<>())
        .def(py::init([](double x, double y, double theta) {
                 return Pose{x, y, theta};
             }),
             py::arg("x"), py::arg("y"), py::arg("theta") = 0.0)
        .def_readwrite("x", &Pose::x)
        .def_readwrite("y", &Pose::y)
        .def_readwrite("theta", &Pose::theta);

    py::class_<ControllerGains>(m, "ControllerGains")
        .def(py::init<>())
        .def_readwrite("v_max", &ControllerGains::v_max)
        .def_readwrite("k_dist", &ControllerGains::k_dist)
        .def_readwrite("kp", &ControllerGains::kp)
        .def_readwrite("kd", &ControllerGains::kd);

    py::class_<RendezvousScenario>(m, "RendezvousScenario")
        .def(py::init<>())
        .def_readwrite("dm", &RendezvousScenario::dm)
        .def_readwrite("c", &RendezvousScenario::c)
        .def_readwrite("initial", &RendezvousScenario::initial)
        .def_readwrite("gains", &RendezvousScenario::gains)
        .def_readwrite("dt", &RendezvousScenario::dt)
        .def_readwrite("consensus_stride", &RendezvousScenario::consensus_stride)
        .def_readwrite("blowup", &RendezvousScenario::blowup);

    py::class_<ControlCommand>(m, "ControlCommand")
        .def_readonly("v", &ControlCommand::v)
        .def_readonly("omega", &ControlCommand::omega)
        .def_readonly("heading_error", &ControlCommand::heading_error);

    py::class_<SwarmState>(m, "SwarmState")
        .def_readonly("poses", &SwarmState::poses)
        .def_readonly("refs", &SwarmState::refs)
        .def_readonly("prev_error", &SwarmState::prev_error)
        .def_readonly("tick", &SwarmState::tick);

    py::class_<Scenario>(m, "Scenario")
        .def_readonly("dm", &Scenario::dm)
        .def_readonly("c", &Scenario::c)
        .def_readonly("W0", &Scenario::W0)
        .def_readonly("max_steps", &Scenario::max_steps)
        .def_readonly("tol", &Scenario::tol)
        .def_readonly("blowup", &Scenario::blowup)
        .def_readonly("seed", &Scenario::seed)
        .def_readonly("dt", &Scenario::dt)
        .def_readonly("poses", &Scenario::poses);

    py::class_<RendezvousTrace::Row>(m, "RendezvousRow")
        .def_readonly("t", &RendezvousTrace::Row::t)
        .def_readonly("agent", &RendezvousTrace::Row::agent)
        .def_readonly("pose", &RendezvousTrace::Row::pose)
        .def_readonly("ref_x", &RendezvousTrace::Row::ref_x)
        .def_readonly("ref_y", &RendezvousTrace::Row::ref_y)
        .def_readonly("v", &RendezvousTrace::Row::v)
        .def_readonly("omega", &RendezvousTrace::Row::omega);

    py::class_<RendezvousTrace>(m, "RendezvousTrace")
        .def_readonly("rows", &RendezvousTrace::rows)
        .def_readonly("predicted", &RendezvousTrace::predicted)
        .def_readonly("achieved", &RendezvousTrace::achieved)
        .def_readonly("terminal_error", &RendezvousTrace::terminal_error)
        .def_readonly("final_reference_spread", &RendezvousTrace::final_reference_spread)
        .def_readonly("success", &RendezvousTrace::success);

    m.def("from_edges", &from_edges, py::arg("n"), py::arg("edges"),
          "Build an undirected simple graph from 1-based endpoint pairs");
    m.def("graph_stats", &graph_stats);
    m.def("laplacian", &laplacian);
    m.def("symmetric_eigen", &symmetric_eigen, py::arg("M"), py::arg("tol") = 1e-12);

    m.def("delay_model", &make_delay_model, py::arg("graph"), py::arg("tau"),
          "Attach a symmetric integer delay matrix to a graph");
    m.def("lag_adjacency", &lag_adjacency, py::arg("dm"), py::arg("m"));
    m.def("delay_aggregates", &delay_aggregates);
    m.def("uniform_delays", &uniform_delays, py::arg("graph"), py::arg("d"));

    m.def("init_history", &init_history, py::arg("W0"), py::arg("dm"));
    m.def("step", &step, py::arg("history"), py::arg("dm"), py::arg("c"));
    m.def("column_spread", &column_spread);
    m.def("simulate", &simulate, py::arg("W0"), py::arg("dm"), py::arg("c"),
          py::arg("max_steps") = 100000, py::arg("tol") = 1e-4, py::arg("blowup") = 10.0,
          py::arg("stride") = 1);

    m.def("augmented_matrix", &augmented_matrix, py::arg("dm"), py::arg("c"));
    m.def("left_eigenvector", &left_eigenvector, py::arg("dm"), py::arg("c"));
    m.def("conserved_quantity", &conserved_quantity, py::arg("v"), py::arg("history"),
          py::arg("j"));
    m.def("predict_uniform", &predict_uniform, py::arg("graph"), py::arg("d"), py::arg("c"),
          py::arg("W0"));
    m.def("predict_nonuniform", &predict_nonuniform, py::arg("dm"), py::arg("c"), py::arg("W0"));
    m.def("rouche_bound", &rouche_bound, py::arg("graph"), py::arg("d"));
    m.def("mode_polynomial", &mode_polynomial, py::arg("delta_i"), py::arg("lambda_L"),
          py::arg("c"), py::arg("d"));
    m.def("polynomial_roots", &polynomial_roots, py::arg("coeffs"));
    m.def("uniform_mode_stability", &uniform_mode_stability, py::arg("graph"), py::arg("d"),
          py::arg("c"));

    m.def("consensus_projector", &consensus_projector, py::arg("N"));
    m.def("lyapunov_candidate", &lyapunov_candidate, py::arg("graph"), py::arg("tau_max"),
          py::arg("delta"));
    m.def("lyapunov_difference", &lyapunov_difference, py::arg("system"), py::arg("P"),
          py::arg("Q"));
    m.def("disagreement_reduction", &disagreement_reduction, py::arg("system"));
    m.def("lmi_feasible", &lmi_feasible, py::arg("dm"), py::arg("c"), py::arg("delta") = 1e-6,
          py::arg("eps") = 1e-10);
    m.def("max_step_size", &max_step_size, py::arg("dm"), py::arg("c_lo"), py::arg("c_hi"),
          py::arg("tol"));

    m.def("init_swarm", &init_swarm);
    m.def("controller", &controller, py::arg("pose"), py::arg("ref_x"), py::arg("ref_y"),
          py::arg("gains"), py::arg("prev_error"), py::arg("dt"));
    m.def("step_swarm", &step_swarm);
    m.def("run_rendezvous", &run_rendezvous, py::arg("scenario"), py::arg("duration"),
          py::arg("capture_tol"));
    m.def("wrap_angle", &wrap_angle);

    m.def("seeded_w0", &seeded_w0, py::arg("n"), py::arg("seed"));
    m.def("parse_scenario", &parse_scenario, py::arg("text"), py::arg("origin") = "<string>");
    m.def("load_scenario", &load_scenario, py::arg("path"));
}
