#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "quib/bounds.hpp"
#include "quib/errors.hpp"
#include "quib/estimator.hpp"
#include "quib/generators.hpp"
#include "quib/io.hpp"
#include "quib/state.hpp"

namespace py = pybind11;
using namespace quib;

namespace {

RegisterLayout layout_from_pairs(const std::vector<std::pair<std::string, long>>& regs) {
    std::vector<Register> rs;
    rs.reserve(regs.size());
    for (const auto& [name, dim] : regs) rs.push_back({name, static_cast<int>(dim)});
    return RegisterLayout(rs);
}

LogBase base_from(const std::string& name) {
    if (name == "nats") return LogBase::nats;
    if (name == "bits") return LogBase::bits;
    throw std::invalid_argument("base must be 'nats' or 'bits'");
}

bounds::BoundConfig bound_config(const std::string& mode,
                                 const estimator::EstimatorConfig& est) {
    bounds::BoundConfig bc;
    if (mode == "oracle")
        bc.mode = bounds::Mode::oracle;
    else if (mode == "estimator")
        bc.mode = bounds::Mode::estimator;
    else
        throw std::invalid_argument("mode must be 'oracle' or 'estimator'");
    bc.est = est;
    return bc;
}

DecompositionSpec spec_from(const std::array<double, 4>& c) {
    DecompositionSpec spec;
    spec.c = c;
    spec.validate();
    return spec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "variational entropy estimates and uncommon-information bounds";

    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::class_<RegisterLayout>(m, "RegisterLayout")
        .def(py::init(&layout_from_pairs), py::arg("registers"),
             "registers: list of (name, dim) pairs, slowest index first")
        .def_property_readonly("total_dim", &RegisterLayout::total_dim)
        .def("dim_of", &RegisterLayout::dim_of, py::arg("name"))
        .def("__len__", &RegisterLayout::size)
        .def("__repr__", [](const RegisterLayout& l) {
            std::string s = "RegisterLayout([";
            for (size_t i = 0; i < l.size(); ++i) {
                if (i) s += ", ";
                s += "('" + l.registers()[i].name + "', " +
                     std::to_string(l.registers()[i].dim) + ")";
            }
            return s + "])";
        });

    py::class_<PureState>(m, "PureState")
        .def(py::init([](const std::vector<std::pair<std::string, long>>& regs,
                         const Eigen::VectorXcd& amps) {
                 return PureState(layout_from_pairs(regs), amps);
             }),
             py::arg("registers"), py::arg("amplitudes"))
        .def_property_readonly("layout", &PureState::layout)
        .def_property_readonly("amplitudes",
                               [](const PureState& s) { return s.amplitudes(); })
        .def_property_readonly("dim", &PureState::dim);

    py::class_<DensityMatrix>(m, "DensityMatrix")
        .def(py::init([](const std::vector<std::pair<std::string, long>>& regs,
                         const Eigen::MatrixXcd& mat, std::optional<int> rank) {
                 return DensityMatrix(layout_from_pairs(regs), mat, rank);
             }),
             py::arg("registers"), py::arg("matrix"), py::arg("rank") = std::nullopt)
        .def_property_readonly("layout", &DensityMatrix::layout)
        .def_property_readonly("matrix",
                               [](const DensityMatrix& r) { return r.matrix(); })
        .def_property_readonly("dim", &DensityMatrix::dim);

    m.def("haar_random_pure",
          [](const std::vector<std::pair<std::string, long>>& regs, std::uint64_t seed) {
              return haar_random_pure(layout_from_pairs(regs), seed);
          },
          py::arg("registers"), py::arg("seed"));
    m.def("random_density", &random_density, py::arg("dim"), py::arg("rank"),
          py::arg("seed"));
    m.def("planted_common_subspace_state", &planted_common_subspace_state,
          py::arg("n_a"), py::arg("k"), py::arg("n_r"), py::arg("lam"), py::arg("seed"));
    m.def("decomposable_state",
          [](const std::array<double, 4>& c) { return decomposable_state(spec_from(c)); },
          py::arg("c"));

    m.def("to_density", &to_density, py::arg("psi"));
    m.def("reduce",
          py::overload_cast<const PureState&, const std::vector<std::string>&>(&reduce),
          py::arg("psi"), py::arg("keep"));
    m.def("reduce",
          py::overload_cast<const DensityMatrix&, const std::vector<std::string>&>(
              &reduce),
          py::arg("rho"), py::arg("keep"));
    m.def("entropy_exact",
          [](const DensityMatrix& rho, const std::string& base) {
              return entropy_exact(rho, base_from(base));
          },
          py::arg("rho"), py::arg("base") = "bits");
    m.def("purify", &purify, py::arg("rho"), py::arg("ref_name") = "P");

    py::class_<estimator::EstimatorConfig>(m, "EstimatorConfig")
        .def(py::init<>())
        .def_readwrite("rank", &estimator::EstimatorConfig::rank)
        .def_readwrite("epsilon", &estimator::EstimatorConfig::epsilon)
        .def_readwrite("c_override", &estimator::EstimatorConfig::c_override)
        .def_readwrite("c_max", &estimator::EstimatorConfig::c_max)
        .def_readwrite("learning_rate", &estimator::EstimatorConfig::learning_rate)
        .def_readwrite("max_steps", &estimator::EstimatorConfig::max_steps)
        .def_readwrite("conv_window", &estimator::EstimatorConfig::conv_window)
        .def_readwrite("conv_tol", &estimator::EstimatorConfig::conv_tol)
        .def_readwrite("early_stop", &estimator::EstimatorConfig::early_stop)
        .def_readwrite("layers", &estimator::EstimatorConfig::layers)
        .def_readwrite("shots", &estimator::EstimatorConfig::shots)
        .def_readwrite("seed", &estimator::EstimatorConfig::seed);

    py::class_<estimator::TraceRow>(m, "TraceRow")
        .def_readonly("step", &estimator::TraceRow::step)
        .def_readonly("cost_nats", &estimator::TraceRow::cost_nats)
        .def_readonly("grad_norm", &estimator::TraceRow::grad_norm);

    py::class_<estimator::EntropyEstimate>(m, "EntropyEstimate")
        .def_readonly("value_nats", &estimator::EntropyEstimate::value_nats)
        .def_readonly("value_bits", &estimator::EntropyEstimate::value_bits)
        .def_readonly("steps_used", &estimator::EntropyEstimate::steps_used)
        .def_readonly("converged", &estimator::EntropyEstimate::converged)
        .def_readonly("trace", &estimator::EntropyEstimate::trace);

    m.def("choose_c", &estimator::choose_c, py::arg("rank"), py::arg("dim"),
          py::arg("epsilon"));
    m.def("estimate_entropy", &estimator::estimate_entropy, py::arg("rho"),
          py::arg("config") = estimator::EstimatorConfig{});

    py::class_<bounds::CommonSubspace>(m, "CommonSubspace")
        .def_readonly("indices", &bounds::CommonSubspace::indices);

    py::class_<bounds::BoundValue>(m, "BoundValue")
        .def_readonly("bits", &bounds::BoundValue::bits)
        .def_readonly("estimates", &bounds::BoundValue::estimates);

    py::class_<bounds::TightUpperResult>(m, "TightUpperResult")
        .def_readonly("bits", &bounds::TightUpperResult::bits)
        .def_readonly("u_bits", &bounds::TightUpperResult::u_bits)
        .def_readonly("loose_upper_bits", &bounds::TightUpperResult::loose_upper_bits)
        .def_readonly("subspace", &bounds::TightUpperResult::subspace)
        .def_readonly("estimates", &bounds::TightUpperResult::estimates);

    m.def("find_common_subspace", &bounds::find_common_subspace, py::arg("psi"),
          py::arg("tol") = 1e-9);
    m.def("loose_upper",
          [](const PureState& psi, const std::string& mode,
             const estimator::EstimatorConfig& est) {
              return bounds::loose_upper(psi, bound_config(mode, est));
          },
          py::arg("psi"), py::arg("mode") = "oracle",
          py::arg("config") = estimator::EstimatorConfig{});
    m.def("loose_lower",
          [](const PureState& psi, const std::string& mode,
             const estimator::EstimatorConfig& est) {
              return bounds::loose_lower(psi, bound_config(mode, est));
          },
          py::arg("psi"), py::arg("mode") = "oracle",
          py::arg("config") = estimator::EstimatorConfig{});
    m.def("tight_upper",
          [](const PureState& psi, const std::string& mode,
             const estimator::EstimatorConfig& est) {
              return bounds::tight_upper(psi, std::nullopt, bound_config(mode, est));
          },
          py::arg("psi"), py::arg("mode") = "oracle",
          py::arg("config") = estimator::EstimatorConfig{});
    m.def("tight_lower",
          [](const std::array<double, 4>& c, const std::string& mode,
             const estimator::EstimatorConfig& est) {
              return bounds::tight_lower(spec_from(c), bound_config(mode, est));
          },
          py::arg("c"), py::arg("mode") = "oracle",
          py::arg("config") = estimator::EstimatorConfig{});

    m.def("save_state",
          [](const std::string& path, const PureState& psi) { io::save_state(path, psi); },
          py::arg("path"), py::arg("psi"));
    m.def("save_density",
          [](const std::string& path, const DensityMatrix& rho) {
              io::save_state(path, rho);
          },
          py::arg("path"), py::arg("rho"));
    m.def("load_state",
          [](const std::string& path) -> py::object {
              const io::LoadedState s = io::load_state(path);
              if (std::holds_alternative<PureState>(s))
                  return py::cast(std::get<PureState>(s));
              return py::cast(std::get<DensityMatrix>(s));
          },
          py::arg("path"));
}
