#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "blefp/beacon_select.hpp"
#include "blefp/estimator.hpp"
#include "blefp/evalbench.hpp"
#include "blefp/ingest.hpp"
#include "blefp/json_io.hpp"
#include "blefp/preprocess.hpp"
#include "blefp/similarity.hpp"

namespace py = pybind11;
using namespace blefp;

namespace {

Observation obs_from_dict(const std::map<int, double>& values) {
    Observation o;
    for (const auto& [b, v] : values) o.values[b] = v;
    return o;
}

}  // namespace

PYBIND11_MODULE(_blefp, m) {
    m.doc() = "RSS-fingerprint indoor localization core";

    py::register_exception<Error>(m, "BlefpError");

    py::class_<GridPoint>(m, "GridPoint")
        .def(py::init<>())
        .def_readwrite("label", &GridPoint::label)
        .def_readwrite("coord", &GridPoint::coord);

    py::class_<Fingerprint>(m, "Fingerprint")
        .def_readonly("grid", &Fingerprint::grid)
        .def_readonly("values", &Fingerprint::values)
        .def_readonly("variances", &Fingerprint::variances)
        .def_readonly("counts", &Fingerprint::counts);

    py::class_<FingerprintDatabase>(m, "FingerprintDatabase")
        .def_readonly("fingerprints", &FingerprintDatabase::fingerprints)
        .def_readonly("n_beacons", &FingerprintDatabase::n_beacons)
        .def_readonly("beacon_names", &FingerprintDatabase::beacon_names)
        .def("__len__",
             [](const FingerprintDatabase& db) { return db.fingerprints.size(); });

    py::class_<Metric>(m, "Metric")
        .def(py::init<>())
        .def_readwrite("sigma", &Metric::sigma)
        .def_readwrite("p", &Metric::p)
        .def_readwrite("rate", &Metric::rate);

    py::class_<Neighbor>(m, "Neighbor")
        .def_readonly("grid_label", &Neighbor::grid_label)
        .def_readonly("score", &Neighbor::score)
        .def_readonly("weight", &Neighbor::weight);

    py::class_<Estimate>(m, "Estimate")
        .def_readonly("coord", &Estimate::coord)
        .def_readonly("neighbors", &Estimate::neighbors);

    m.def("parse_metric", &parse_metric, py::arg("name"));

    m.def(
        "similarity",
        [](const Metric& metric, const std::map<int, double>& f,
           const std::map<int, double>& o) {
            return similarity(metric, obs_from_dict(f).values, obs_from_dict(o).values);
        },
        py::arg("metric"), py::arg("fingerprint"), py::arg("observation"));

    m.def(
        "gamma_threshold",
        [](int s, double eta, double ta, double td) {
            return gamma_threshold({s, eta, {ta, td}});
        },
        py::arg("s"), py::arg("eta"), py::arg("ta"), py::arg("td"));

    m.def("load_database", &load_database, py::arg("path"));
    m.def("save_database", &save_database, py::arg("db"), py::arg("path"));

    m.def(
        "build_database",
        [](const std::string& csv, const std::string& schema_path, int window,
           double ta, double td) {
            const auto schema = load_schema(schema_path);
            return build_database(parse_csv(csv, schema), window, {ta, td});
        },
        py::arg("csv"), py::arg("schema"), py::arg("window") = 10,
        py::arg("ta") = 0.1, py::arg("td") = 30.0);

    m.def(
        "apply_selection",
        [](FingerprintDatabase& db, int s, double eta) {
            apply_selection(db, {s, eta, db.timing});
        },
        py::arg("db"), py::arg("s"), py::arg("eta") = 0.2);

    m.def(
        "estimate",
        [](const FingerprintDatabase& db, const std::map<int, double>& obs,
           const Metric& metric, int k, const std::string& weights, bool selection) {
            return estimate(db, obs_from_dict(obs), metric, k,
                            parse_weight_scheme(weights), selection);
        },
        py::arg("db"), py::arg("observation"), py::arg("metric"), py::arg("k") = 1,
        py::arg("weights") = "uniform", py::arg("selection") = false);

    m.def(
        "synth_log_csv",
        [](const std::string& scenario_path, std::uint64_t seed,
           const std::string& out_csv) {
            const auto log = synth_log(load_scenario(scenario_path), seed);
            save_raw_log_csv(log, out_csv);
            return log.records.size();
        },
        py::arg("scenario"), py::arg("seed"), py::arg("out_csv"));
}
