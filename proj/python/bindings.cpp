#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "instance_forge/classifier.hpp"
#include "instance_forge/ea.hpp"
#include "instance_forge/errors.hpp"
#include "instance_forge/io.hpp"
#include "instance_forge/oracle.hpp"

namespace py = pybind11;
using namespace instance_forge;

namespace {

TspInstance make_instance(const std::vector<std::pair<double, double>>& coords, std::string id) {
    std::vector<Point> cities;
    cities.reserve(coords.size());
    for (const auto& [x, y] : coords) {
        cities.push_back({x, y});
    }
    return TspInstance(std::move(cities), std::move(id));
}

std::vector<std::pair<double, double>> coordinates(const TspInstance& inst) {
    std::vector<std::pair<double, double>> out;
    for (const auto& c : inst.cities()) {
        out.emplace_back(c.x, c.y);
    }
    return out;
}

py::dict feature_dict(const FeatureVector& fv) {
    py::dict d;
    for (auto f : all_features) {
        d[py::str(std::string(feature_name(f)))] = fv[f];
    }
    return d;
}

std::vector<int> tour_vector(const Tour& t) {
    return {t.order().begin(), t.order().end()};
}

py::dict run_log_dict(const RunLog& log) {
    py::list generations;
    for (const auto& g : log.generations) {
        py::dict r;
        r["gen"] = g.generation;
        r["feat_min"] = g.feature_min;
        r["feat_max"] = g.feature_max;
        r["range"] = g.range;
        r["alpha_min"] = g.alpha_min;
        r["alpha_max"] = g.alpha_max;
        r["accepted"] = g.accepted;
        r["removed"] = g.removed;
        generations.append(r);
    }
    py::list population;
    for (const auto& m : log.population) {
        py::dict r;
        r["cities"] = coordinates(m.inst);
        r["features"] = feature_dict(m.features);
        r["alpha"] = m.alpha;
        population.append(r);
    }
    py::dict out;
    out["generations"] = generations;
    out["population"] = population;
    out["evaluations"] = log.evaluations;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Diverse easy/hard TSP instance evolution for 2-OPT, instance features and SVM separation.";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<CapacityError>(m, "CapacityError", PyExc_RuntimeError);
    py::register_exception<OracleError>(m, "OracleError", PyExc_RuntimeError);
    py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);

    py::class_<TspInstance>(m, "TspInstance")
        .def(py::init(&make_instance), py::arg("cities"), py::arg("id") = std::string{})
        .def_property_readonly("cities", &coordinates)
        .def_property_readonly("id", &TspInstance::id)
        .def("__len__", &TspInstance::size)
        .def("__eq__", [](const TspInstance& a, const TspInstance& b) { return a == b; })
        .def("to_json", [](const TspInstance& inst) { return format_instance(inst); });

    m.def("distance", [](std::pair<double, double> a, std::pair<double, double> b) {
        return distance({a.first, a.second}, {b.first, b.second});
    });
    m.def("tour_length", [](const TspInstance& inst, std::vector<int> order) {
        return tour_length(inst, Tour(std::move(order)));
    }, py::arg("instance"), py::arg("order"));
    m.def("random_instance", [](std::size_t n, std::uint64_t seed) {
        RandomSource rng(seed);
        return random_instance(n, rng);
    }, py::arg("n"), py::arg("seed"));
    m.def("read_instance", &read_instance, py::arg("path"));
    m.def("write_instance", &write_instance, py::arg("instance"), py::arg("path"));

    m.def("feature_names", [] {
        std::vector<std::string> names;
        for (auto f : all_features) {
            names.emplace_back(feature_name(f));
        }
        return names;
    });
    m.def("feature_bound", [](const std::string& name, std::size_t n) { return feature_bound(parse_feature(name), n); },
          py::arg("feature"), py::arg("n"));
    m.def("compute_features", [](const TspInstance& inst) { return feature_dict(compute_all(inst)); });

    m.def("two_opt", [](const TspInstance& inst, std::vector<int> start) {
        return tour_vector(two_opt(inst, Tour(std::move(start))));
    }, py::arg("instance"), py::arg("start"));
    m.def("exact_optimum", &exact_optimum, py::arg("instance"), py::arg("max_exact") = default_max_exact);
    m.def("solve", [](const TspInstance& inst, std::size_t restarts, std::uint64_t seed, const std::string& oracle) {
        RandomSource rng(seed);
        const auto r = evaluate_ratio(inst, OptOracle::parse_spec(oracle), rng, restarts);
        py::dict d;
        d["A"] = r.a;
        d["OPT"] = r.opt;
        d["alpha"] = r.alpha;
        d["best_tour"] = tour_vector(r.best_tour);
        return d;
    }, py::arg("instance"), py::arg("restarts") = default_restarts, py::arg("seed") = 0,
          py::arg("oracle") = std::string("exact"));

    m.def("single_feature_contributions", [](std::vector<double> values, double bound) {
        return single_feature_contributions(values, bound);
    }, py::arg("values"), py::arg("bound"));
    m.def("weighted_contributions", [](std::vector<std::vector<double>> columns, std::vector<double> weights,
                                       std::vector<double> bounds) {
        return weighted_contributions(columns, weights, bounds);
    }, py::arg("columns"), py::arg("weights"), py::arg("bounds"));
    m.def("prune_indices", [](std::vector<std::vector<double>> columns, std::vector<double> weights,
                              std::vector<double> bounds, std::size_t mu, std::uint64_t seed) {
        RandomSource rng(seed);
        return prune_indices(columns, weights, bounds, mu, rng);
    }, py::arg("columns"), py::arg("weights"), py::arg("bounds"), py::arg("mu"), py::arg("seed") = 0);

    m.def("_evolve_json", [](const std::string& config) {
        const auto cfg = EaConfig::from_json(nlohmann::json::parse(config));
        RunLog log;
        {
            py::gil_scoped_release release;
            log = evolve(cfg);
        }
        return run_log_dict(log);
    }, py::arg("config"));

    py::class_<SvmModel>(m, "SvmModel")
        .def_readonly("bias", &SvmModel::bias)
        .def_readonly("alphas", &SvmModel::alphas)
        .def_readonly("labels", &SvmModel::labels)
        .def_readonly("iterations", &SvmModel::iterations)
        .def_readonly("converged", &SvmModel::converged)
        .def("decision_value", [](const SvmModel& model, std::vector<double> row) { return predict(model, row).decision; })
        .def("predict", [](const SvmModel& model, std::vector<double> row) { return predict(model, row).label; })
        .def("to_json", [](const SvmModel& model) { return model.to_json().dump(); });

    m.def("train_svm", [](std::vector<std::vector<double>> rows, std::vector<int> labels, const std::string& kernel,
                          double C, double gamma) {
        const auto spec = kernel == "linear" ? KernelSpec::linear() : KernelSpec::rbf(gamma);
        if (kernel != "linear" && kernel != "rbf") {
            throw ValidationError("kernel must be 'linear' or 'rbf'");
        }
        return train(Dataset{std::move(rows), std::move(labels), {}}, spec, TrainOptions{C});
    }, py::arg("rows"), py::arg("labels"), py::arg("kernel") = std::string("rbf"), py::arg("C") = 100.0,
          py::arg("gamma") = 2.0);
    m.def("training_accuracy", [](const SvmModel& model, std::vector<std::vector<double>> rows, std::vector<int> labels) {
        return training_accuracy(model, Dataset{std::move(rows), std::move(labels), {}});
    }, py::arg("model"), py::arg("rows"), py::arg("labels"));
}
