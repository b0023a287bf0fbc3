#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ringld/critical_rates.hpp"
#include "ringld/distributions.hpp"
#include "ringld/errors.hpp"
#include "ringld/ldp_rates.hpp"
#include "ringld/routing.hpp"
#include "ringld/simulator.hpp"

namespace py = pybind11;
using namespace ringld;

PYBIND11_MODULE(_ringld, m) {
    m.doc() = "Overload scenarios on a ring of join-lesser-workload servers: "
              "rate functions, critical input rates, split optimization, and "
              "rare-event simulation.";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NoRootError>(m, "NoRootError", PyExc_ArithmeticError);
    py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_ArithmeticError);
    py::register_exception<StabilityError>(m, "StabilityError", PyExc_ValueError);
    py::register_exception<InsufficientHitsError>(m, "InsufficientHitsError", PyExc_RuntimeError);
    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);

    py::class_<LegendreResult>(m, "LegendreResult")
        .def_readonly("value", &LegendreResult::value)
        .def_readonly("theta", &LegendreResult::theta);

    py::class_<MessageLengthModel>(m, "MessageLengthModel")
        .def_static("exponential", &MessageLengthModel::exponential, py::arg("c"))
        .def_static("mixture", &MessageLengthModel::mixture, py::arg("c"), py::arg("g"))
        .def_static("deterministic", &MessageLengthModel::deterministic, py::arg("c"))
        .def_static("parse", &MessageLengthModel::parse, py::arg("descriptor"))
        .def_property_readonly("c", &MessageLengthModel::c)
        .def_property_readonly("g", &MessageLengthModel::g)
        .def("descriptor", &MessageLengthModel::descriptor)
        .def("theta_plus", &MessageLengthModel::theta_plus)
        .def("mgf", &MessageLengthModel::mgf, py::arg("theta"))
        .def("mgf_prime", &MessageLengthModel::mgf_prime, py::arg("theta"))
        .def("mean", &MessageLengthModel::mean)
        .def("hat_lambda", &MessageLengthModel::hat_lambda)
        .def("legendre", &MessageLengthModel::legendre, py::arg("lambda_"), py::arg("slope"))
        .def("__repr__", [](const MessageLengthModel& mm) {
            return "MessageLengthModel('" + mm.descriptor() + "')";
        });

    py::class_<NetworkParams>(m, "NetworkParams")
        .def(py::init<int, double, double, MessageLengthModel>(), py::arg("k"), py::arg("lambda_"),
             py::arg("d"), py::arg("model"))
        .def_readonly("k", &NetworkParams::k)
        .def_readonly("lambda_", &NetworkParams::lambda)
        .def_readonly("d", &NetworkParams::d)
        .def_readonly("model", &NetworkParams::model);

    py::class_<OverheatProfile>(m, "OverheatProfile")
        .def_readonly("l", &OverheatProfile::l)
        .def_readonly("theta", &OverheatProfile::theta)
        .def_readonly("rate_value", &OverheatProfile::rate_value)
        .def_readonly("input_slope", &OverheatProfile::input_slope)
        .def_readonly("load_slope", &OverheatProfile::load_slope)
        .def_readonly("duration", &OverheatProfile::duration);

    py::class_<ScenarioEntry>(m, "ScenarioEntry")
        .def_readonly("l", &ScenarioEntry::l)
        .def_readonly("feasible", &ScenarioEntry::feasible)
        .def_readonly("rate_value", &ScenarioEntry::rate_value);

    py::class_<ScenarioReport>(m, "ScenarioReport")
        .def_readonly("entries", &ScenarioReport::entries)
        .def_readonly("l_opt", &ScenarioReport::l_opt);

    py::class_<Configuration>(m, "Configuration")
        .def(py::init([](std::vector<double> slopes, double duration) {
                 return Configuration{std::move(slopes), duration};
             }),
             py::arg("slopes"), py::arg("duration"))
        .def_readonly("slopes", &Configuration::slopes)
        .def_readonly("duration", &Configuration::duration);

    m.def("solve_theta_l", &solve_theta_l, py::arg("model"), py::arg("lambda_"), py::arg("l"));
    m.def("solve_theta_star", &solve_theta_star, py::arg("model"), py::arg("lambda_"));
    m.def("rate_J", &rate_J, py::arg("params"), py::arg("l"));
    m.def("optimal_profile", &optimal_profile, py::arg("params"), py::arg("l"));
    m.def("scenario", &scenario, py::arg("params"));
    m.def("configuration_rate", &configuration_rate, py::arg("model"), py::arg("lambda_"),
          py::arg("config"));
    m.def("balanced_set_rate", &balanced_set_rate, py::arg("model"), py::arg("lambda_"),
          py::arg("h"), py::arg("size"), py::arg("T"));

    py::class_<CriticalPoint>(m, "CriticalPoint")
        .def_readonly("lambda_", &CriticalPoint::lambda)
        .def_readonly("vartheta", &CriticalPoint::vartheta);

    py::class_<CriticalRateTable>(m, "CriticalRateTable")
        .def_readonly("k", &CriticalRateTable::k)
        .def_readonly("hat_lambda", &CriticalRateTable::hat_lambda)
        .def_readonly("star", &CriticalRateTable::star)
        .def_readonly("vs_one", &CriticalRateTable::vs_one)
        .def_readonly("lower", &CriticalRateTable::lower)
        .def_readonly("upper", &CriticalRateTable::upper);

    py::class_<PhaseRow>(m, "PhaseRow")
        .def_readonly("lambda_", &PhaseRow::lambda)
        .def_readonly("l_opt", &PhaseRow::l_opt)
        .def_readonly("entries", &PhaseRow::entries);

    py::class_<PhaseDiagram>(m, "PhaseDiagram")
        .def_readonly("k", &PhaseDiagram::k)
        .def_readonly("d", &PhaseDiagram::d)
        .def_readonly("rows", &PhaseDiagram::rows);

    m.def("lambda_star_kl", &lambda_star_kl, py::arg("model"), py::arg("k"), py::arg("l"));
    m.def("lambda_l2l1", &lambda_l2l1, py::arg("model"), py::arg("l2"), py::arg("l1"));
    m.def("lambda_lower", &lambda_lower, py::arg("model"), py::arg("k"));
    m.def("lambda_upper", &lambda_upper, py::arg("model"), py::arg("k"));
    m.def("critical_table", &critical_table, py::arg("model"), py::arg("k"));
    m.def(
        "phase_sweep",
        [](const MessageLengthModel& model, int k, double d, std::vector<double> lambdas) {
            return phase_sweep(model, k, d, lambdas);
        },
        py::arg("model"), py::arg("k"), py::arg("d"), py::arg("lambdas"));

    py::class_<RoutingSolution>(m, "RoutingSolution")
        .def_readonly("server_loads", &RoutingSolution::server_loads)
        .def_readonly("splits", &RoutingSolution::splits)
        .def_readonly("imbalance", &RoutingSolution::imbalance);

    py::class_<FlowArc>(m, "FlowArc")
        .def_readonly("first", &FlowArc::first)
        .def_readonly("length", &FlowArc::length);

    m.def(
        "solve_ring", [](std::vector<double> a) { return solve_ring(a); }, py::arg("slopes"));
    m.def(
        "solve_arc", [](std::vector<double> a) { return solve_arc(a); }, py::arg("slopes"));
    m.def(
        "is_balanced", [](std::vector<double> a, double tol) { return is_balanced(a, tol); },
        py::arg("slopes"), py::arg("tol") = 1e-9);
    m.def("maximal_balanced_sets", &maximal_balanced_sets, py::arg("config"),
          py::arg("tol") = 1e-9);

    py::class_<TiltConfig>(m, "TiltConfig")
        .def(py::init([](int flows, double theta) { return TiltConfig{flows, theta}; }),
             py::arg("flows"), py::arg("theta") = 0.0)
        .def_readonly("flows", &TiltConfig::flows)
        .def_readonly("theta", &TiltConfig::theta);

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init([](NetworkParams params, int n, int trials, std::uint64_t seed, double warmup,
                         double window, std::optional<TiltConfig> tilt, bool collect_census,
                         double census_epsilon, double census_min_slope) {
                 SimConfig cfg{std::move(params), n,    trials,         seed,          warmup,
                               window,            tilt, collect_census, census_epsilon, census_min_slope};
                 return cfg;
             }),
             py::arg("params"), py::arg("n"), py::arg("trials"), py::arg("seed"),
             py::arg("warmup") = -1.0, py::arg("window") = -1.0,
             py::arg("tilt") = std::optional<TiltConfig>{}, py::arg("collect_census") = false,
             py::arg("census_epsilon") = 0.1, py::arg("census_min_slope") = 1.0)
        .def_readonly("params", &SimConfig::params)
        .def_readonly("n", &SimConfig::n)
        .def_readonly("trials", &SimConfig::trials)
        .def_readonly("seed", &SimConfig::seed);

    py::class_<FlowCensus>(m, "FlowCensus")
        .def_readonly("slope_freq", &FlowCensus::slope_freq)
        .def_readonly("overheat_freq", &FlowCensus::overheat_freq)
        .def_readonly("mean_slope", &FlowCensus::mean_slope);

    py::class_<CensusReport>(m, "CensusReport")
        .def_readonly("hits", &CensusReport::hits)
        .def_readonly("solitary_freq", &CensusReport::solitary_freq)
        .def_readonly("collective_freq", &CensusReport::collective_freq)
        .def_readonly("mean_overheat_count", &CensusReport::mean_overheat_count)
        .def_readonly("flows", &CensusReport::flows);

    py::class_<SimulationResult>(m, "SimulationResult")
        .def_readonly("p_hat", &SimulationResult::p_hat)
        .def_readonly("log_p_hat", &SimulationResult::log_p_hat)
        .def_readonly("rel_se", &SimulationResult::rel_se)
        .def_readonly("empirical_rate", &SimulationResult::empirical_rate)
        .def_readonly("hits", &SimulationResult::hits)
        .def_readonly("trials", &SimulationResult::trials)
        .def_readonly("n", &SimulationResult::n)
        .def_readonly("level", &SimulationResult::level)
        .def_readonly("window", &SimulationResult::window)
        .def_readonly("omega", &SimulationResult::omega)
        .def_readonly("census", &SimulationResult::census);

    m.def("estimate_overload", &estimate_overload, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("overheat_census", &overheat_census, py::arg("config"), py::arg("window"),
          py::arg("min_slope"), py::arg("epsilon"), py::call_guard<py::gil_scoped_release>());
}
