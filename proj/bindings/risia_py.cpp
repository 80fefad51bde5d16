// Python bindings for the solver core: channel sampling, the rank pursuit,
// verification, rate evaluation, and sweep runs.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "risia/ia_core.hpp"
#include "risia/netsim.hpp"
#include "risia/pursuit.hpp"
#include "risia/serialize.hpp"

namespace py = pybind11;
using namespace risia;

PYBIND11_MODULE(_core, m) {
  m.doc() = "RIS-assisted interference alignment: block-structured "
            "Riemannian pursuit and channel simulation";

  py::class_<NetworkConfig>(m, "NetworkConfig")
      .def(py::init([](int pairs, const std::vector<int>& tx,
                       const std::vector<int>& rx, const std::vector<int>& d,
                       int ris) {
             NetworkConfig net{pairs, tx, rx, d, ris};
             net.validate();
             return net;
           }),
           py::arg("pairs"), py::arg("tx_antennas"), py::arg("rx_antennas"),
           py::arg("streams"), py::arg("ris_elements"))
      .def_static("symmetric", &NetworkConfig::symmetric, py::arg("pairs"),
                  py::arg("tx_antennas"), py::arg("rx_antennas"),
                  py::arg("streams"), py::arg("ris_elements"))
      .def_readonly("pairs", &NetworkConfig::pairs)
      .def_readonly("tx_antennas", &NetworkConfig::tx_antennas)
      .def_readonly("rx_antennas", &NetworkConfig::rx_antennas)
      .def_readonly("streams", &NetworkConfig::streams)
      .def_readonly("ris_elements", &NetworkConfig::ris_elements)
      .def_property_readonly("row_dim", &NetworkConfig::row_dim)
      .def_property_readonly("col_dim", &NetworkConfig::col_dim)
      .def_property_readonly("target_dim", &NetworkConfig::target_dim);

  py::class_<ChannelSet>(m, "ChannelSet")
      .def_readonly("net", &ChannelSet::net)
      .def_readonly("noise_power", &ChannelSet::noise_power)
      .def_readonly("tx_power", &ChannelSet::tx_power)
      .def("direct", [](const ChannelSet& ch, int i, int j) {
        return ch.direct.at(i).at(j);
      })
      .def("ris_rx", [](const ChannelSet& ch, int i) { return ch.ris_rx.at(i); })
      .def("tx_ris", [](const ChannelSet& ch, int j) { return ch.tx_ris.at(j); });

  py::class_<LayoutSpec>(m, "LayoutSpec")
      .def(py::init<>())
      .def_readwrite("ris_position", &LayoutSpec::ris_position)
      .def_readwrite("tx_region", &LayoutSpec::tx_region)
      .def_readwrite("rx_region", &LayoutSpec::rx_region);

  py::enum_<LosModel>(m, "LosModel")
      .value("SteeringOuterProduct", LosModel::SteeringOuterProduct)
      .value("AllOnes", LosModel::AllOnes);

  py::class_<FadingSpec>(m, "FadingSpec")
      .def(py::init<>())
      .def_readwrite("t0_db", &FadingSpec::t0_db)
      .def_readwrite("alpha_direct", &FadingSpec::alpha_direct)
      .def_readwrite("alpha_tx_ris", &FadingSpec::alpha_tx_ris)
      .def_readwrite("alpha_ris_rx", &FadingSpec::alpha_ris_rx)
      .def_readwrite("beta_rt", &FadingSpec::beta_rt)
      .def_readwrite("beta_it", &FadingSpec::beta_it)
      .def_readwrite("beta_ir", &FadingSpec::beta_ir)
      .def_readwrite("los_model", &FadingSpec::los_model);

  py::class_<RcgOptions>(m, "RcgOptions")
      .def(py::init<>())
      .def_readwrite("grad_tol", &RcgOptions::grad_tol)
      .def_readwrite("max_iters", &RcgOptions::max_iters)
      .def_readwrite("armijo_c1", &RcgOptions::armijo_c1)
      .def_readwrite("armijo_shrink", &RcgOptions::armijo_shrink)
      .def_readwrite("armijo_max_backtracks", &RcgOptions::armijo_max_backtracks)
      .def_readwrite("initial_step", &RcgOptions::initial_step);

  py::class_<PursuitOptions>(m, "PursuitOptions")
      .def(py::init<>())
      .def_readwrite("outer_tol", &PursuitOptions::outer_tol)
      .def_readwrite("max_alternations", &PursuitOptions::max_alternations)
      .def_readwrite("r_start", &PursuitOptions::r_start)
      .def_readwrite("r_max", &PursuitOptions::r_max)
      .def_readwrite("restarts_per_rank", &PursuitOptions::restarts_per_rank)
      .def_readwrite("inner", &PursuitOptions::inner)
      .def_readwrite("warm_start_rank_increase",
                     &PursuitOptions::warm_start_rank_increase)
      .def_readwrite("optimize_phase", &PursuitOptions::optimize_phase)
      .def_readwrite("seed", &PursuitOptions::seed);

  py::class_<FactorPair>(m, "FactorPair")
      .def_readonly("left", &FactorPair::left)
      .def_readonly("right", &FactorPair::right)
      .def_property_readonly("rank", &FactorPair::rank)
      .def("product", &FactorPair::product);

  py::class_<AlignmentSolution>(m, "AlignmentSolution")
      .def_readonly("feasible", &AlignmentSolution::feasible)
      .def_readonly("rank", &AlignmentSolution::rank)
      .def_readonly("phase", &AlignmentSolution::phase)
      .def_readonly("factors", &AlignmentSolution::factors)
      .def_readonly("decoders", &AlignmentSolution::decoders)
      .def_readonly("precoders", &AlignmentSolution::precoders)
      .def_readonly("residual", &AlignmentSolution::residual)
      .def_readonly("dof", &AlignmentSolution::dof);

  py::class_<AlignmentReport>(m, "AlignmentReport")
      .def_readonly("max_interference_leakage",
                    &AlignmentReport::max_interference_leakage)
      .def_readonly("max_identity_deviation",
                    &AlignmentReport::max_identity_deviation)
      .def_readonly("pass_", &AlignmentReport::pass)
      .def("__bool__", [](const AlignmentReport& r) { return r.pass; });

  py::enum_<Scheme>(m, "Scheme")
      .value("Optimized", Scheme::Optimized)
      .value("RandomPhase", Scheme::RandomPhase)
      .value("NoRis", Scheme::NoRis);

  py::enum_<SweepVariable>(m, "SweepVariable")
      .value("RxAntennas", SweepVariable::RxAntennas)
      .value("Snr", SweepVariable::Snr)
      .value("RicianRT", SweepVariable::RicianRT)
      .value("RisElements", SweepVariable::RisElements);

  py::class_<SweepSpec>(m, "SweepSpec")
      .def(py::init<>())
      .def_readwrite("variable", &SweepSpec::variable)
      .def_readwrite("values", &SweepSpec::values)
      .def_readwrite("trials", &SweepSpec::trials)
      .def_readwrite("network", &SweepSpec::network)
      .def_readwrite("layout", &SweepSpec::layout)
      .def_readwrite("fading", &SweepSpec::fading)
      .def_readwrite("pursuit", &SweepSpec::pursuit)
      .def_readwrite("schemes", &SweepSpec::schemes)
      .def_readwrite("snr_db", &SweepSpec::snr_db)
      .def_readwrite("noise_power_db", &SweepSpec::noise_power_db)
      .def_readwrite("seed", &SweepSpec::seed)
      .def_readwrite("threads", &SweepSpec::threads);

  py::class_<ExperimentRecord>(m, "ExperimentRecord")
      .def_readonly("value", &ExperimentRecord::value)
      .def_readonly("scheme", &ExperimentRecord::scheme)
      .def_readonly("trial", &ExperimentRecord::trial)
      .def_readonly("rank", &ExperimentRecord::rank)
      .def_readonly("dof", &ExperimentRecord::dof)
      .def_readonly("residual", &ExperimentRecord::residual)
      .def_readonly("sum_rate_bps_hz", &ExperimentRecord::sum_rate_bps_hz)
      .def_readonly("wall_ms", &ExperimentRecord::wall_ms)
      .def_readonly("failed", &ExperimentRecord::failed);

  m.def("path_loss", &path_loss, py::arg("distance"), py::arg("alpha"),
        py::arg("t0_db"), "10^(t0_db/10) * d^(-alpha)");
  m.def("sample_channels", &sample_channels, py::arg("net"), py::arg("layout"),
        py::arg("fading"), py::arg("seed"), py::arg("noise_power") = 1e-12,
        py::arg("tx_power") = 1.0);
  m.def("build_target", &build_target, py::arg("net"));
  m.def(
      "objective_f0",
      [](const ChannelSet& ch, const FactorPair& f, const Vec& v) {
        return objective_f0(ch, f, v);
      },
      py::arg("channels"), py::arg("factors"), py::arg("phase"));
  m.def("solve", &riemannian_pursuit, py::arg("channels"), py::arg("options"),
        py::arg("fixed_phase") = std::nullopt,
        "Run the block-structured rank pursuit",
        py::call_guard<py::gil_scoped_release>());
  m.def("random_phase_baseline", &random_phase_baseline, py::arg("channels"),
        py::arg("options"), py::call_guard<py::gil_scoped_release>());
  m.def("without_ris", &without_ris, py::arg("channels"));
  m.def(
      "verify_alignment",
      [](const ChannelSet& ch, const Vec& phase, const std::vector<Mat>& u,
         const std::vector<Mat>& v, double tol) {
        return verify_alignment(ch, phase, u, v, tol);
      },
      py::arg("channels"), py::arg("phase"), py::arg("decoders"),
      py::arg("precoders"), py::arg("tol"));
  m.def("sum_rate", &sum_rate, py::arg("channels"), py::arg("solution"),
        py::arg("snr_db"), py::arg("include_interference") = true);
  m.def("run_sweep", &run_sweep, py::arg("spec"),
        py::call_guard<py::gil_scoped_release>());

#ifdef VERSION_INFO
  m.attr("__version__") = VERSION_INFO;
#else
  m.attr("__version__") = "dev";
#endif
}
