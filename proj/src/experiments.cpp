#include "driftwatch/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "driftwatch/errors.hpp"
#include "driftwatch/parallel.hpp"
#include "driftwatch/rng.hpp"

namespace driftwatch {

namespace {

using nlohmann::json;

// Seed slots under (base, n, r).
constexpr std::uint64_t kSlotPath = 0;
constexpr std::uint64_t kSlotContamination = 1;

std::string test_id(const TrimSpec& trim) {
    switch (trim.variant) {
        case TrimVariant::None: return "Tn";
        case TrimVariant::HardClip: return "T1";
        case TrimVariant::Tent: return "T2";
    }
    return "Tn";
}

bool key_less(const McCellKey& a, const McCellKey& b) {
    if (a.n != b.n) return a.n < b.n;
    if (a.test != b.test) return a.test < b.test;
    if (a.m != b.m) return a.m < b.m;
    return a.alpha < b.alpha;
}

struct TestPlan {
    McCellKey key;
    TrimSpec trim;
    double alpha = 0.0;
};

std::vector<TestPlan> build_plans(const McSpec& spec, std::size_t n) {
    std::vector<TestPlan> plans;
    if (spec.include_naive) {
        plans.push_back({{n, "Tn", 0.0, 0.0}, TrimSpec::none(), 0.0});
    }
    for (const TrimSpec& trim : spec.trims) {
        for (double alpha : spec.alphas) {
            const double m = trim.variant == TrimVariant::None ? 0.0 : trim.m;
            plans.push_back({{n, test_id(trim), alpha, m}, trim, alpha});
        }
    }
    std::sort(plans.begin(), plans.end(),
              [](const TestPlan& a, const TestPlan& b) { return key_less(a.key, b.key); });
    return plans;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

const McCell* McTable::find(const McCellKey& key) const {
    for (const auto& [k, cell] : cells) {
        if (k == key) return &cell;
    }
    return nullptr;
}

McTable run_mc(const McSpec& spec) {
    if (spec.reps < 1) throw std::invalid_argument("run_mc: reps must be >= 1");
    if (!(spec.level > 0.0 && spec.level < 1.0)) {
        throw std::invalid_argument("run_mc: level must be in (0, 1)");
    }
    const DriftModel model = model_by_name(spec.model);
    if (spec.null_params.theta.size() != model.dim_theta) {
        throw std::invalid_argument("run_mc: null_params dimension mismatch");
    }
    if (spec.alt_params && spec.alt_params->theta.size() != model.dim_theta) {
        throw std::invalid_argument("run_mc: alt_params dimension mismatch");
    }
    const double crit = critical_value(spec.level);

    McTable table;
    for (std::size_t n : spec.n_list) {
        const std::vector<TestPlan> plans = build_plans(spec, n);
        if (plans.empty()) continue;

        // Fit once per distinct alpha, reuse squared residuals across plans.
        std::vector<double> fit_alphas;
        for (const TestPlan& p : plans) fit_alphas.push_back(p.alpha);
        std::sort(fit_alphas.begin(), fit_alphas.end());
        fit_alphas.erase(std::unique(fit_alphas.begin(), fit_alphas.end()),
                         fit_alphas.end());

        std::vector<std::atomic<int>> rejections(plans.size());
        std::vector<std::atomic<int>> failures(plans.size());
        for (auto& a : rejections) a.store(0);
        for (auto& a : failures) a.store(0);

        SimConfig base_cfg;
        base_cfg.n = n;
        base_cfg.gamma = spec.gamma;
        base_cfg.substeps = spec.substeps;
        base_cfg.x0 = spec.x0;

        parallel_for(static_cast<std::size_t>(spec.reps), [&](std::size_t r) {
            SimConfig cfg = base_cfg;
            cfg.seed = derive_seed(spec.base_seed, n, r, kSlotPath);

            SamplePath path;
            if (spec.alt_params) {
                path = simulate_path_with_change(
                    model, spec.null_params.theta, spec.null_params.sigma,
                    spec.alt_params->theta, spec.alt_params->sigma,
                    spec.alt_params->change_frac, cfg);
            } else {
                path = simulate_path(model, spec.null_params.theta,
                                     spec.null_params.sigma, cfg);
            }
            if (spec.contamination) {
                path = contaminate(path, *spec.contamination,
                                   derive_seed(spec.base_seed, n, r, kSlotContamination));
            }

            for (double alpha : fit_alphas) {
                std::vector<double> squares;
                bool fit_ok = true;
                try {
                    MdpdeConfig mcfg;
                    mcfg.alpha = alpha;
                    mcfg.optimizer = spec.optimizer;
                    const ParamEstimate est = fit(model, path, mcfg);
                    const ResidualSeries res = residuals(model, path, est);
                    squares.resize(res.values.size());
                    for (std::size_t i = 0; i < squares.size(); ++i) {
                        squares[i] = res.values[i] * res.values[i];
                    }
                } catch (const EstimationError&) {
                    fit_ok = false;
                } catch (const DataError&) {
                    fit_ok = false;
                }
                for (std::size_t t = 0; t < plans.size(); ++t) {
                    if (plans[t].alpha != alpha) continue;
                    if (!fit_ok) {
                        failures[t].fetch_add(1);
                        continue;
                    }
                    try {
                        const TestOutcome outcome = cusum_statistic(squares, plans[t].trim);
                        if (outcome.statistic > crit) rejections[t].fetch_add(1);
                    } catch (const DataError&) {
                        failures[t].fetch_add(1);
                    }
                }
            }
        });

        for (std::size_t t = 0; t < plans.size(); ++t) {
            McCell cell;
            cell.reps = spec.reps;
            cell.failures = failures[t].load();
            const int effective = spec.reps - cell.failures;
            if (effective > 0) {
                cell.reject_rate =
                    static_cast<double>(rejections[t].load()) / effective;
                cell.mc_stderr = std::sqrt(cell.reject_rate * (1.0 - cell.reject_rate) /
                                           effective);
            }
            table.cells.emplace_back(plans[t].key, cell);
        }
    }
    std::sort(table.cells.begin(), table.cells.end(),
              [](const auto& a, const auto& b) { return key_less(a.first, b.first); });
    return table;
}

std::string emit_table(const McTable& table, TableFormat format) {
    std::ostringstream out;
    if (format == TableFormat::Csv) {
        out << "n,test,alpha,M,reject_rate,mc_stderr,failures,reps\n";
        for (const auto& [key, cell] : table.cells) {
            out << key.n << ',' << key.test << ',' << format_double(key.alpha) << ','
                << format_double(key.m) << ',' << format_double(cell.reject_rate) << ','
                << format_double(cell.mc_stderr) << ',' << cell.failures << ','
                << cell.reps << '\n';
        }
        return out.str();
    }
    char line[160];
    std::snprintf(line, sizeof(line), "%6s %-4s %6s %6s %12s %10s %9s\n", "n", "test",
                  "alpha", "M", "reject_rate", "stderr", "failures");
    out << line;
    for (const auto& [key, cell] : table.cells) {
        const bool flagged = cell.failures > 0.01 * cell.reps;
        std::snprintf(line, sizeof(line), "%6zu %-4s %6.3g %6.3g %12.4f %10.4f %8d%s\n",
                      key.n, key.test.c_str(), key.alpha, key.m, cell.reject_rate,
                      cell.mc_stderr, cell.failures, flagged ? "*" : "");
        out << line;
    }
    return out.str();
}

McTable parse_table_csv(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line.rfind("n,test,alpha,M", 0) != 0) {
        throw DataError("parse_table_csv: missing header");
    }
    McTable table;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() != 8) {
            throw DataError("parse_table_csv: bad row at line " + std::to_string(line_no));
        }
        try {
            McCellKey key{std::stoul(fields[0]), fields[1], std::stod(fields[2]),
                          std::stod(fields[3])};
            McCell cell{std::stod(fields[4]), std::stod(fields[5]), std::stoi(fields[6]),
                        std::stoi(fields[7])};
            table.cells.emplace_back(std::move(key), cell);
        } catch (const std::exception&) {
            throw DataError("parse_table_csv: bad value at line " + std::to_string(line_no));
        }
    }
    return table;
}

std::string emit_curves(const CurveSpec& curve) {
    if (curve.axis != "p" && curve.axis != "sigma1") {
        throw std::invalid_argument("emit_curves: axis must be 'p' or 'sigma1'");
    }
    std::ostringstream out;
    out << "axis,x,n,test,alpha,M,reject_rate,mc_stderr\n";
    for (double x : curve.grid) {
        McSpec spec = curve.spec;
        if (curve.axis == "p") {
            ContaminationSpec cont =
                spec.contamination.value_or(ContaminationSpec{0.0, 1.0});
            cont.prob = x;
            spec.contamination = cont;
        } else {
            ChangeSpec change;
            if (spec.alt_params) {
                change = *spec.alt_params;
            } else {
                change.theta = spec.null_params.theta;
                change.change_frac = 0.5;
            }
            change.sigma = x;
            spec.alt_params = change;
        }
        const McTable table = run_mc(spec);
        for (const auto& [key, cell] : table.cells) {
            out << curve.axis << ',' << format_double(x) << ',' << key.n << ','
                << key.test << ',' << format_double(key.alpha) << ','
                << format_double(key.m) << ',' << format_double(cell.reject_rate) << ','
                << format_double(cell.mc_stderr) << '\n';
        }
    }
    return out.str();
}

namespace {

TrimSpec trim_from_json(const json& j) {
    const std::string variant = j.at("variant").get<std::string>();
    const double m = j.value("m", 0.0);
    if (variant == "none") return TrimSpec::none();
    if (variant == "hard") return TrimSpec::hard_clip(m);
    if (variant == "tent") return TrimSpec::tent(m);
    throw DataError("mc spec: unknown trim variant '" + variant + "'");
}

json trim_to_json(const TrimSpec& t) {
    return json{{"variant", t.variant_name()}, {"m", t.m}};
}

}  // namespace

McSpec mc_spec_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("mc spec: invalid JSON: ") + e.what());
    }
    try {
        McSpec spec;
        spec.model = j.value("model", spec.model);
        spec.n_list = j.at("n_list").get<std::vector<std::size_t>>();
        spec.reps = j.value("reps", spec.reps);
        spec.gamma = j.value("gamma", spec.gamma);
        spec.substeps = j.value("substeps", spec.substeps);
        spec.x0 = j.value("x0", spec.x0);
        if (j.contains("null_params")) {
            spec.null_params.theta =
                j["null_params"].at("theta").get<std::vector<double>>();
            spec.null_params.sigma = j["null_params"].at("sigma").get<double>();
        }
        if (j.contains("alt_params") && !j["alt_params"].is_null()) {
            ChangeSpec alt;
            alt.theta = j["alt_params"].at("theta").get<std::vector<double>>();
            alt.sigma = j["alt_params"].at("sigma").get<double>();
            alt.change_frac = j["alt_params"].value("change_frac", 0.5);
            spec.alt_params = alt;
        }
        if (j.contains("contamination") && !j["contamination"].is_null()) {
            ContaminationSpec cont;
            cont.prob = j["contamination"].at("prob").get<double>();
            cont.var_v = j["contamination"].at("var_v").get<double>();
            spec.contamination = cont;
        }
        spec.alphas = j.value("alphas", std::vector<double>{});
        if (j.contains("trims")) {
            for (const auto& t : j["trims"]) spec.trims.push_back(trim_from_json(t));
        }
        spec.include_naive = j.value("include_naive", spec.include_naive);
        spec.level = j.value("level", spec.level);
        spec.base_seed = j.value("base_seed", spec.base_seed);
        if (j.contains("optimizer")) {
            const auto& o = j["optimizer"];
            spec.optimizer.max_iters = o.value("max_iters", spec.optimizer.max_iters);
            spec.optimizer.tol_x = o.value("tol_x", spec.optimizer.tol_x);
            spec.optimizer.tol_f = o.value("tol_f", spec.optimizer.tol_f);
            spec.optimizer.multistart_count =
                o.value("multistart_count", spec.optimizer.multistart_count);
        }
        return spec;
    } catch (const json::exception& e) {
        throw DataError(std::string("mc spec: ") + e.what());
    }
}

std::string mc_spec_to_json(const McSpec& spec) {
    json j;
    j["model"] = spec.model;
    j["n_list"] = spec.n_list;
    j["reps"] = spec.reps;
    j["gamma"] = spec.gamma;
    j["substeps"] = spec.substeps;
    j["x0"] = spec.x0;
    j["null_params"] = {{"theta", spec.null_params.theta},
                        {"sigma", spec.null_params.sigma}};
    if (spec.alt_params) {
        j["alt_params"] = {{"theta", spec.alt_params->theta},
                           {"sigma", spec.alt_params->sigma},
                           {"change_frac", spec.alt_params->change_frac}};
    }
    if (spec.contamination) {
        j["contamination"] = {{"prob", spec.contamination->prob},
                              {"var_v", spec.contamination->var_v}};
    }
    j["alphas"] = spec.alphas;
    j["trims"] = json::array();
    for (const TrimSpec& t : spec.trims) j["trims"].push_back(trim_to_json(t));
    j["include_naive"] = spec.include_naive;
    j["level"] = spec.level;
    j["base_seed"] = spec.base_seed;
    j["optimizer"] = {{"max_iters", spec.optimizer.max_iters},
                      {"tol_x", spec.optimizer.tol_x},
                      {"tol_f", spec.optimizer.tol_f},
                      {"multistart_count", spec.optimizer.multistart_count}};
    return j.dump(2);
}

namespace {

std::vector<TrimSpec> standard_trims() {
    return {TrimSpec::hard_clip(kTrimM005), TrimSpec::tent(kTrimM005),
            TrimSpec::hard_clip(kTrimM025), TrimSpec::tent(kTrimM025)};
}

McSpec standard_spec(int reps, std::uint64_t seed) {
    McSpec spec;
    spec.model = "ou-centered";
    spec.n_list = {200, 500, 1000, 3000};
    spec.reps = reps;
    spec.gamma = 0.75;
    spec.substeps = 20;
    spec.x0 = 0.0;
    spec.null_params = {{1.0}, 1.0};
    spec.alphas = {0.1, 0.2, 0.3, 0.5, 1.0};
    spec.trims = standard_trims();
    spec.level = 0.05;
    spec.base_seed = seed;
    return spec;
}

}  // namespace

bool preset_is_curve(const std::string& name) {
    return name == "fig1" || name == "fig2";
}

McSpec mc_preset(const std::string& name, int reps, std::uint64_t seed) {
    McSpec spec = standard_spec(reps, seed);
    if (name == "table1") return spec;
    if (name == "table2") {
        spec.alt_params = ChangeSpec{{1.0}, 1.5, 0.5};
        spec.n_list = {200, 500, 1000};
        return spec;
    }
    if (name == "table3" || name == "table4") {
        spec.contamination = ContaminationSpec{0.005, 1.0};
        if (name == "table4") {
            spec.alt_params = ChangeSpec{{1.0}, 1.5, 0.5};
            spec.n_list = {200, 500, 1000};
        }
        return spec;
    }
    if (name == "table5" || name == "table6") {
        spec.contamination = ContaminationSpec{0.05, 1.0};
        if (name == "table6") {
            spec.alt_params = ChangeSpec{{1.0}, 1.5, 0.5};
            spec.n_list = {200, 500, 1000};
        }
        return spec;
    }
    throw std::invalid_argument("unknown preset '" + name + "'");
}

CurveSpec curve_preset(const std::string& name, int reps, std::uint64_t seed) {
    CurveSpec curve;
    curve.spec = standard_spec(reps, seed);
    curve.spec.alphas = {0.2};
    curve.spec.n_list = {200, 500, 1000};
    if (name == "fig1") {
        curve.axis = "p";
        curve.grid = {0.0, 0.005, 0.01, 0.02, 0.03, 0.04, 0.05};
        curve.spec.contamination = ContaminationSpec{0.0, 1.0};
        return curve;
    }
    if (name == "fig2") {
        curve.axis = "sigma1";
        curve.grid = {1.0, 1.1, 1.2, 1.3, 1.4, 1.5};
        curve.spec.contamination = ContaminationSpec{0.005, 1.0};
        curve.spec.alt_params = ChangeSpec{{1.0}, 1.5, 0.5};
        curve.spec.n_list = {500};
        return curve;
    }
    throw std::invalid_argument("unknown curve preset '" + name + "'");
}

}  // namespace driftwatch
