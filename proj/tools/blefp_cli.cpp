#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "blefp/beacon_select.hpp"
#include "blefp/estimator.hpp"
#include "blefp/evalbench.hpp"
#include "blefp/ingest.hpp"
#include "blefp/json_io.hpp"
#include "blefp/preprocess.hpp"
#include "blefp/similarity.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Exit codes: 0 success, 2 input/usage error, 3 infeasible configuration,
// 4 internal invariant violation.
constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitInvariant = 4;

// JSON config files mirroring the subcommand flags, e.g.
// {"metric": "kernel", "k": 1, "selection": "on"}
class ConfigJSON : public CLI::Config {
  public:
    std::string to_config(const CLI::App*, bool, bool, std::string) const override {
        return "{}\n";
    }
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        nlohmann::json j;
        input >> j;
        std::vector<CLI::ConfigItem> out;
        for (const auto& [key, value] : j.items()) {
            CLI::ConfigItem item;
            item.name = key;
            if (value.is_boolean())
                item.inputs = {value.get<bool>() ? "true" : "false"};
            else if (value.is_string())
                item.inputs = {value.get<std::string>()};
            else if (value.is_array())
                for (const auto& v : value) item.inputs.push_back(v.dump());
            else
                item.inputs = {value.dump()};
            out.push_back(std::move(item));
        }
        return out;
    }
};

void add_json_config(CLI::App* app) {
    app->config_formatter(std::make_shared<ConfigJSON>());
    app->set_config("--config", "", "JSON config file mirroring the flags");
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::vector<int> parse_range(const std::string& spec) {
    const auto dash = spec.find(':');
    std::vector<int> out;
    if (dash == std::string::npos) {
        out.push_back(std::stoi(spec));
        return out;
    }
    const int lo = std::stoi(spec.substr(0, dash));
    const int hi = std::stoi(spec.substr(dash + 1));
    if (lo < 1 || hi < lo) throw blefp::Error("bad range '" + spec + "'");
    for (int v = lo; v <= hi; ++v) out.push_back(v);
    return out;
}

struct EvaluateArgs {
    std::string db_path, test_path, schema_path, report_dir;
    int protocol = 2;
    std::string metric = "kernel";
    std::string sigma = "auto";
    int k = 1;
    std::string weights = "uniform";
    std::string selection = "on";
    std::string k_range, s_range;
    std::string train_mode = "fingerprints";
    std::string train_path;
    bool impute_floor = false;
    double floor_rss = -100.0;
};

int run_evaluate(const EvaluateArgs& a) {
    auto db = blefp::load_database(a.db_path);
    const bool selection_on = a.selection == "on";
    if (selection_on && db.selection.empty()) {
        std::cerr << "error: database has no selection sets; run 'select' first "
                     "or pass --selection off\n";
        return kExitInfeasible;
    }

    blefp::CsvSchema schema = blefp::load_schema(a.schema_path);
    if (schema.beacons.empty()) schema.beacons = db.beacon_names;
    const auto log = blefp::parse_csv(a.test_path, schema);

    std::vector<blefp::LabeledObservation> obs;
    if (a.protocol == 1) {
        std::vector<blefp::BeaconId> universe;
        for (int b = 0; b < db.n_beacons; ++b) universe.push_back(b);
        obs = blefp::consolidate_protocol1(log, universe);
    } else if (a.protocol == 2) {
        obs = blefp::consolidate_protocol2(log);
    } else {
        std::cerr << "error: protocol must be 1 or 2\n";
        return kExitInput;
    }

    const auto scheme = blefp::parse_weight_scheme(a.weights);
    blefp::AlignOptions align_opts;
    align_opts.impute_floor = a.impute_floor;
    align_opts.floor_rss = a.floor_rss;

    double sigma;
    if (a.sigma == "auto") {
        if (db.kernel_sigma) {
            sigma = *db.kernel_sigma;
        } else {
            sigma = blefp::tune_sigma(db, a.k, scheme, selection_on);
            std::cout << "tuned kernel sigma: " << sigma << " dBm\n";
        }
    } else {
        sigma = std::stod(a.sigma);
        if (sigma <= 0) throw blefp::Error("sigma must be positive");
    }

    fs::create_directories(a.report_dir);
    ordered_json summary;
    summary["db"] = a.db_path;
    summary["test"] = a.test_path;
    summary["protocol"] = a.protocol;
    summary["k"] = a.k;
    summary["weights"] = a.weights;
    summary["selection"] = a.selection;
    summary["sigma"] = sigma;
    summary["n_observations"] = obs.size();

    if (a.metric == "all") {
        std::vector<blefp::Metric> metrics;
        for (auto kind : blefp::all_metric_kinds()) {
            blefp::Metric m;
            m.kind = kind;
            m.sigma = sigma;
            metrics.push_back(m);
        }
        const auto rows = blefp::run_metric_comparison(db, obs, metrics, a.k, scheme,
                                                       selection_on);
        std::ofstream out(fs::path(a.report_dir) / "metric_comparison.csv",
                          std::ios::binary);
        out << "metric,mean_error_cm,n,skipped\n";
        for (const auto& r : rows) {
            out << blefp::metric_name(r.metric) << ',' << fmt(r.mean_error_cm) << ','
                << r.n << ',' << r.skipped << "\n";
            std::cout << blefp::metric_name(r.metric) << ": "
                      << fmt(r.mean_error_cm) << " cm (n=" << r.n << ")\n";
        }
        summary["report"] = "metric_comparison.csv";
    } else {
        blefp::Metric metric = blefp::parse_metric(a.metric);
        metric.sigma = sigma;
        std::vector<double> errors;
        std::size_t skipped = 0;
        std::ofstream jl(fs::path(a.report_dir) / "errors.jsonl", std::ios::binary);
        for (const auto& lo : obs) {
            try {
                const auto est = blefp::estimate(db, lo.obs, metric, a.k, scheme,
                                                 selection_on, align_opts);
                const blefp::Fingerprint* fp = db.find(lo.grid_label);
                if (!fp) throw blefp::Error("unknown grid label '" + lo.grid_label + "'");
                const double err = blefp::error_of(est, fp->grid);
                errors.push_back(err);
                ordered_json line;
                line["grid_label"] = lo.grid_label;
                line["error_cm"] = err;
                line["estimate"] = {est.coord[0], est.coord[1]};
                jl << line.dump() << "\n";
            } catch (const blefp::NoCommonBeacons&) {
                ++skipped;
            }
        }
        const double mean_err = blefp::mean(errors);
        summary["metric"] = a.metric;
        summary["mean_error_cm"] = mean_err;
        summary["n_scored"] = errors.size();
        summary["n_skipped"] = skipped;
        std::ofstream cdf_out(fs::path(a.report_dir) / "cdf.csv", std::ios::binary);
        cdf_out << "error_cm,cumulative_fraction\n";
        for (const auto& [e, f] : blefp::error_cdf(errors))
            cdf_out << fmt(e) << ',' << fmt(f) << "\n";
        std::cout << "mean error: " << fmt(mean_err) << " cm (n=" << errors.size()
                  << ", skipped=" << skipped << ")\n";

        if (!a.k_range.empty()) {
            const auto rows = blefp::run_k_sweep(db, obs, metric, parse_range(a.k_range),
                                                 scheme, selection_on);
            std::ofstream out(fs::path(a.report_dir) / "k_sweep.csv", std::ios::binary);
            out << "k,mean_error_cm,n\n";
            for (const auto& r : rows)
                out << r.k << ',' << fmt(r.mean_error_cm) << ','
                    << r.per_sample_errors.size() << "\n";
        }
        if (!a.s_range.empty()) {
            std::vector<blefp::TrainingSample> train;
            if (a.train_mode == "fingerprints") {
                for (const auto& fp : db.fingerprints) {
                    blefp::TrainingSample t;
                    t.coord = fp.grid.coord;
                    t.obs.values = fp.values;
                    train.push_back(std::move(t));
                }
            } else if (a.train_mode == "raw") {
                if (a.train_path.empty())
                    throw blefp::Error("--train-mode raw needs --train <survey.csv>");
                const auto train_log = blefp::parse_csv(a.train_path, schema);
                for (const auto& lo : blefp::consolidate_protocol2(train_log)) {
                    const blefp::Fingerprint* fp = db.find(lo.grid_label);
                    if (!fp) continue;
                    blefp::TrainingSample t;
                    t.coord = fp->grid.coord;
                    t.obs = lo.obs;
                    train.push_back(std::move(t));
                }
            } else {
                throw blefp::Error("--train-mode must be 'fingerprints' or 'raw'");
            }
            blefp::SelectionConfig cfg = db.selection_config
                                             ? *db.selection_config
                                             : blefp::SelectionConfig{10, 0.2, db.timing};
            const auto rows = blefp::validate_s(train, db, metric, a.k, scheme,
                                                parse_range(a.s_range), cfg);
            std::ofstream out(fs::path(a.report_dir) / "s_sweep.csv", std::ios::binary);
            out << "s,feasible,cost,mean_error_cm\n";
            for (const auto& r : rows)
                out << r.s << ',' << (r.feasible ? 1 : 0) << ',' << fmt(r.cost) << ','
                    << fmt(r.mean_error_cm) << "\n";
        }
    }

    std::ofstream sj(fs::path(a.report_dir) / "summary.json", std::ios::binary);
    sj << summary.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RSS-fingerprint indoor localization pipeline"};
    app.require_subcommand(1);

    // build-db
    auto* build = app.add_subcommand("build-db", "Build a fingerprint database "
                                                 "from a survey log");
    std::string b_input, b_schema, b_out;
    int b_window = 10;
    double b_ta = 0.1, b_td = 30.0;
    build->add_option("--input", b_input, "survey CSV")->required();
    build->add_option("--schema", b_schema, "JSON column schema")->required();
    build->add_option("--window", b_window, "moving-average window")->check(CLI::PositiveNumber);
    build->add_option("--ta", b_ta, "advertising interval, s")->check(CLI::PositiveNumber);
    build->add_option("--td", b_td, "scan duration per grid point, s")->check(CLI::PositiveNumber);
    build->add_option("--out", b_out, "output database JSON")->required();
    add_json_config(build);

    // select
    auto* sel = app.add_subcommand("select", "Compute per-grid-point beacon "
                                             "selection sets");
    std::string s_db, s_out;
    int s_s = 10;
    double s_eta = 0.2;
    sel->add_option("--db", s_db, "database JSON")->required();
    sel->add_option("--s", s_s, "number of selected beacons")->check(CLI::PositiveNumber);
    sel->add_option("--eta", s_eta, "tolerated signal-loss rate")
        ->check(CLI::Range(0.0, 0.999));
    sel->add_option("--out", s_out, "output path (defaults to --db)");
    add_json_config(sel);

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "Run the localization benchmark");
    EvaluateArgs ea;
    ev->add_option("--db", ea.db_path)->required();
    ev->add_option("--test", ea.test_path, "test CSV")->required();
    ev->add_option("--schema", ea.schema_path, "JSON column schema")->required();
    ev->add_option("--protocol", ea.protocol, "consolidation protocol (1 or 2)");
    ev->add_option("--metric", ea.metric,
                   "kernel|cosine|euclidean|cityblock|chebyshev|correlation|"
                   "minkowski|spearman|all");
    ev->add_option("--sigma", ea.sigma, "Gaussian width in dBm, or 'auto'");
    ev->add_option("--k", ea.k, "number of neighbors")->check(CLI::PositiveNumber);
    ev->add_option("--weights", ea.weights, "uniform|similarity");
    ev->add_option("--selection", ea.selection, "on|off");
    ev->add_option("--k-range", ea.k_range, "sweep k, e.g. 1:10");
    ev->add_option("--s-range", ea.s_range, "sweep s, e.g. 1:16");
    ev->add_option("--train-mode", ea.train_mode, "fingerprints|raw");
    ev->add_option("--train", ea.train_path, "survey CSV for --train-mode raw");
    ev->add_flag("--impute-floor", ea.impute_floor,
                 "fill missing beacons at the floor RSS instead of intersecting");
    ev->add_option("--floor-rss", ea.floor_rss, "floor RSS for --impute-floor");
    ev->add_option("--report", ea.report_dir, "report output directory")->required();
    add_json_config(ev);

    // synth
    auto* sy = app.add_subcommand("synth", "Generate a synthetic scan log");
    std::string y_scenario, y_out, y_schema_out, y_scenario_out;
    std::uint64_t y_seed = 1;
    sy->add_option("--scenario", y_scenario, "scenario JSON")->required();
    sy->add_option("--seed", y_seed);
    sy->add_option("--out", y_out, "output CSV")->required();
    sy->add_option("--schema-out", y_schema_out, "also write a matching schema");
    sy->add_option("--scenario-out", y_scenario_out, "re-serialize the scenario");
    add_json_config(sy);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (build->parsed()) {
            const auto schema = blefp::load_schema(b_schema);
            const auto log = blefp::parse_csv(b_input, schema);
            const auto db = blefp::build_database(log, b_window, {b_ta, b_td});
            blefp::save_database(db, b_out);
            std::cout << db.fingerprints.size() << " fingerprints, " << db.n_beacons
                      << " beacons\n";
        } else if (sel->parsed()) {
            auto db = blefp::load_database(s_db);
            blefp::SelectionConfig cfg{s_s, s_eta, db.timing};
            try {
                blefp::apply_selection(db, cfg);
            } catch (const blefp::InfeasibleSelection&) {
                // report every offending grid point, not just the first
                std::cerr << "error: selection infeasible at s=" << s_s << " for:";
                for (const auto& fp : db.fingerprints) {
                    try {
                        blefp::select(fp, cfg);
                    } catch (const blefp::InfeasibleSelection& g) {
                        std::cerr << " " << g.grid_label << "(" << g.eligible << ")";
                    }
                }
                std::cerr << "\n";
                return kExitInfeasible;
            }
            blefp::save_database(db, s_out.empty() ? s_db : s_out);
            std::cout << "selection sets stored for " << db.fingerprints.size()
                      << " grid points (s=" << s_s << ", eta=" << s_eta << ")\n";
        } else if (ev->parsed()) {
            return run_evaluate(ea);
        } else if (sy->parsed()) {
            const auto sc = blefp::load_scenario(y_scenario);
            const auto log = blefp::synth_log(sc, y_seed);
            blefp::save_raw_log_csv(log, y_out);
            if (!y_schema_out.empty()) blefp::save_builtin_schema(y_schema_out);
            if (!y_scenario_out.empty()) blefp::save_scenario(sc, y_scenario_out);
            std::cout << log.records.size() << " records, "
                      << log.beacon_names.size() << " beacons, " << log.coords.size()
                      << " grid points\n";
        }
    } catch (const blefp::InfeasibleSelection& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const blefp::InvariantViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const blefp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariant;
    }
    return kExitOk;
}
