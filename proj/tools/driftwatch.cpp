#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "driftwatch/changepoint.hpp"
#include "driftwatch/csv.hpp"
#include "driftwatch/errors.hpp"
#include "driftwatch/estimate.hpp"
#include "driftwatch/experiments.hpp"
#include "driftwatch/forecast.hpp"
#include "driftwatch/model.hpp"
#include "driftwatch/simulate.hpp"

namespace dw = driftwatch;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitEstimation = 3;

void write_output(const std::string& out_file, const std::string& content) {
    if (out_file.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_file);
    if (!out) throw dw::DataError("cannot open output file '" + out_file + "'");
    out << content;
}

json estimate_to_json(const dw::ParamEstimate& est) {
    return json{{"theta_hat", est.theta_hat}, {"sigma_hat", est.sigma_hat},
                {"alpha", est.alpha},         {"objective", est.objective_value},
                {"converged", est.converged}, {"iterations", est.iterations}};
}

json outcome_to_json(const dw::TestOutcome& outcome) {
    return json{{"statistic", outcome.statistic},
                {"p_value", outcome.p_value},
                {"k_hat", outcome.k_hat},
                {"tau_hat", outcome.tau_hat},
                {"alpha", outcome.alpha},
                {"trim", {{"variant", outcome.trim.variant_name()}, {"m", outcome.trim.m}}}};
}

dw::TrimSpec make_trim(const std::string& variant, double m) {
    if (variant == "none") return dw::TrimSpec::none();
    if (variant == "hard") return dw::TrimSpec::hard_clip(m);
    if (variant == "tent") return dw::TrimSpec::tent(m);
    throw std::invalid_argument("--trim expects none|hard|tent, got '" + variant + "'");
}

struct SimulateArgs {
    std::string model = "ou-centered";
    std::vector<double> theta;
    double sigma = 1.0;
    std::size_t n = 0;
    double gamma = 0.0;
    double h = 0.0;
    int substeps = 20;
    double x0 = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> contaminate;  // p, var_v
    std::vector<double> change;       // frac, theta1..., sigma1
    std::string out;
};

int run_simulate(const SimulateArgs& args) {
    const dw::DriftModel model = dw::model_by_name(args.model);
    dw::SimConfig cfg;
    cfg.n = args.n;
    cfg.gamma = args.gamma;
    cfg.h = args.h;
    cfg.substeps = args.substeps;
    cfg.x0 = args.x0;
    cfg.seed = args.seed;

    dw::SamplePath path;
    if (!args.change.empty()) {
        if (args.change.size() != model.dim_theta + 2) {
            throw std::invalid_argument("--change needs frac,theta1...,sigma1 (" +
                                        std::to_string(model.dim_theta + 2) + " values)");
        }
        const double frac = args.change.front();
        const std::vector<double> theta1(args.change.begin() + 1, args.change.end() - 1);
        const double sigma1 = args.change.back();
        path = dw::simulate_path_with_change(model, args.theta, args.sigma, theta1,
                                             sigma1, frac, cfg);
    } else {
        path = dw::simulate_path(model, args.theta, args.sigma, cfg);
    }

    if (!args.contaminate.empty()) {
        if (args.contaminate.size() != 2) {
            throw std::invalid_argument("--contaminate needs p,var_v");
        }
        dw::ContaminationSpec spec{args.contaminate[0], args.contaminate[1]};
        path = dw::contaminate(path, spec, dw::derive_seed(args.seed, 1));
    }

    std::ostringstream out;
    dw::write_path_csv(out, path);
    write_output(args.out, out.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dispersion change detection for discretely observed diffusions"};
    app.require_subcommand(1);

    // --- simulate ---
    SimulateArgs sim;
    CLI::App* c_sim = app.add_subcommand("simulate", "Generate an Euler-scheme sample path");
    c_sim->add_option("--model", sim.model, "ou-centered | ou-mean-reverting");
    c_sim->add_option("--theta", sim.theta, "drift parameters")
        ->required()
        ->delimiter(',');
    c_sim->add_option("--sigma", sim.sigma, "dispersion")->required();
    c_sim->add_option("--n", sim.n, "observation count")->required();
    c_sim->add_option("--gamma", sim.gamma, "step rule h = n^-gamma");
    c_sim->add_option("--h", sim.h, "explicit step (overrides --gamma)");
    c_sim->add_option("--substeps", sim.substeps, "generation refinement (default 20)");
    c_sim->add_option("--x0", sim.x0, "initial value");
    c_sim->add_option("--seed", sim.seed, "PRNG seed")->required();
    c_sim->add_option("--contaminate", sim.contaminate, "outliers: p,var_v")
        ->delimiter(',');
    c_sim->add_option("--change", sim.change, "parameter switch: frac,theta1...,sigma1")
        ->delimiter(',');
    c_sim->add_option("--out", sim.out, "output CSV file (default stdout)");

    // --- estimate ---
    struct {
        std::string model = "ou-centered";
        double alpha = 0.0;
        std::string in;
        double h = 0.0;
        std::string out;
    } est;
    CLI::App* c_est = app.add_subcommand("estimate", "Fit (theta, sigma) by MDPDE");
    c_est->add_option("--model", est.model)->required();
    c_est->add_option("--alpha", est.alpha, "divergence exponent (0 = quasi-MLE)");
    c_est->add_option("--in", est.in, "input CSV (t,x or single x column)")->required();
    c_est->add_option("--h", est.h, "step when the CSV has no t column");
    c_est->add_option("--out", est.out, "output file (default stdout)");

    // --- test ---
    struct {
        std::string model = "ou-centered";
        double alpha = 0.2;
        std::string trim = "tent";
        double m = dw::kTrimM005;
        std::string in;
        double h = 0.0;
        std::string out;
    } tst;
    CLI::App* c_tst = app.add_subcommand("test", "CUSUM test for dispersion change");
    c_tst->add_option("--model", tst.model)->required();
    c_tst->add_option("--alpha", tst.alpha, "MDPDE exponent (default 0.2)");
    c_tst->add_option("--trim", tst.trim, "none | hard | tent (default tent)");
    c_tst->add_option("--M", tst.m, "truncation constant (default 6.63)");
    c_tst->add_option("--in", tst.in)->required();
    c_tst->add_option("--h", tst.h);
    c_tst->add_option("--out", tst.out);

    // --- segment ---
    struct {
        std::string model = "ou-centered";
        double alpha = 0.2;
        std::string trim = "tent";
        double m = dw::kTrimM005;
        double level = 0.05;
        std::size_t min_segment = 30;
        std::vector<double> alphas;
        std::string in;
        double h = 0.0;
        std::string out;
    } seg;
    CLI::App* c_seg = app.add_subcommand("segment", "Multiple change points by binary segmentation");
    c_seg->add_option("--model", seg.model)->required();
    c_seg->add_option("--alpha", seg.alpha, "MDPDE exponent used for testing");
    c_seg->add_option("--trim", seg.trim);
    c_seg->add_option("--M", seg.m);
    c_seg->add_option("--level", seg.level, "significance level (default 0.05)");
    c_seg->add_option("--min-segment", seg.min_segment, "minimum residuals per segment");
    c_seg->add_option("--alphas", seg.alphas, "extra exponents for per-segment estimates")
        ->delimiter(',');
    c_seg->add_option("--in", seg.in)->required();
    c_seg->add_option("--h", seg.h);
    c_seg->add_option("--out", seg.out);

    // --- forecast ---
    struct {
        std::string model = "ou-mean-reverting";
        double alpha = 0.0;
        std::string in;
        double h = 0.0;
        std::size_t eval_start = 0;
        std::size_t from = 0;
        std::size_t refit_every = 1;
        std::string records;
        std::string out;
    } fc;
    CLI::App* c_fc = app.add_subcommand("forecast", "Rolling one-step-ahead evaluation");
    c_fc->add_option("--model", fc.model);
    c_fc->add_option("--alpha", fc.alpha);
    c_fc->add_option("--in", fc.in)->required();
    c_fc->add_option("--h", fc.h, "step (required when the CSV has no t column)");
    c_fc->add_option("--eval-start", fc.eval_start, "first forecast origin")->required();
    c_fc->add_option("--from", fc.from, "first observation used for fitting");
    c_fc->add_option("--refit-every", fc.refit_every, "refit cadence (default 1)");
    c_fc->add_option("--records", fc.records, "CSV file for per-forecast records");
    c_fc->add_option("--out", fc.out);

    // --- mc ---
    struct {
        std::string config;
        std::string preset;
        int reps = 1000;
        std::uint64_t seed = 0;
        bool seed_set = false;
        std::string format = "csv";
        std::string out;
    } mc;
    CLI::App* c_mc = app.add_subcommand("mc", "Monte Carlo size/power experiments");
    c_mc->add_option("--config", mc.config, "JSON experiment spec");
    CLI::Option* preset_opt =
        c_mc->add_option("--preset", mc.preset,
                         "table1|table2|table3|table4|table5|table6|fig1|fig2");
    c_mc->add_option("--reps", mc.reps, "replications per cell (default 1000)");
    CLI::Option* seed_opt = c_mc->add_option("--seed", mc.seed, "base seed");
    c_mc->add_option("--format", mc.format, "csv | text (default csv)");
    c_mc->add_option("--out", mc.out);
    preset_opt->needs(seed_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    mc.seed_set = seed_opt->count() > 0;

    try {
        if (c_sim->parsed()) return run_simulate(sim);

        if (c_est->parsed()) {
            const dw::DriftModel model = dw::model_by_name(est.model);
            const dw::SamplePath path = dw::read_series_csv_file(est.in, est.h);
            dw::MdpdeConfig cfg;
            cfg.alpha = est.alpha;
            const dw::ParamEstimate result = dw::fit(model, path, cfg);
            write_output(est.out, estimate_to_json(result).dump(2) + "\n");
            return kExitOk;
        }

        if (c_tst->parsed()) {
            const dw::DriftModel model = dw::model_by_name(tst.model);
            const dw::SamplePath path = dw::read_series_csv_file(tst.in, tst.h);
            const dw::TestOutcome outcome =
                dw::run_test(model, path, tst.alpha, make_trim(tst.trim, tst.m));
            write_output(tst.out, outcome_to_json(outcome).dump(2) + "\n");
            return kExitOk;
        }

        if (c_seg->parsed()) {
            const dw::DriftModel model = dw::model_by_name(seg.model);
            const dw::SamplePath path = dw::read_series_csv_file(seg.in, seg.h);
            const dw::SegmentationResult result = dw::binary_segmentation(
                model, path, seg.alpha, make_trim(seg.trim, seg.m), seg.level,
                seg.min_segment);
            std::vector<double> alphas = seg.alphas;
            if (alphas.empty()) alphas.push_back(seg.alpha);
            json j;
            j["level"] = result.level;
            j["change_points"] = result.change_points;
            j["segments"] = json::array();
            for (const dw::Segment& s : result.segments) {
                json js{{"start", s.start}, {"end", s.end}};
                js["estimates"] = json::array();
                for (double a : alphas) {
                    dw::MdpdeConfig cfg;
                    cfg.alpha = a;
                    const dw::ParamEstimate e =
                        dw::fit(model, path.slice(s.start, s.end), cfg);
                    js["estimates"].push_back(estimate_to_json(e));
                }
                j["segments"].push_back(std::move(js));
            }
            write_output(seg.out, j.dump(2) + "\n");
            return kExitOk;
        }

        if (c_fc->parsed()) {
            const dw::DriftModel model = dw::model_by_name(fc.model);
            const dw::SamplePath path = dw::read_series_csv_file(fc.in, fc.h);
            dw::MdpdeConfig cfg;
            cfg.alpha = fc.alpha;
            const auto [score, records] = dw::rolling_evaluate(
                model, path, fc.eval_start, cfg, fc.refit_every, fc.from);
            if (!fc.records.empty()) {
                std::ofstream rec_out(fc.records);
                if (!rec_out) throw dw::DataError("cannot open '" + fc.records + "'");
                rec_out << "t,actual,predicted,pi_lo,pi_hi\n";
                for (const dw::ForecastRecord& r : records) {
                    rec_out << static_cast<double>(r.index) * path.step << ',' << r.actual
                            << ',' << r.predicted << ',' << r.pi_lo << ',' << r.pi_hi
                            << '\n';
                }
            }
            json j{{"rmse", score.rmse},
                   {"rmspe", score.rmspe},
                   {"pi_coverage_count", score.pi_coverage_count},
                   {"n_forecasts", score.n_forecasts}};
            write_output(fc.out, j.dump(2) + "\n");
            return kExitOk;
        }

        if (c_mc->parsed()) {
            if (mc.config.empty() == mc.preset.empty()) {
                throw std::invalid_argument("mc: pass exactly one of --config / --preset");
            }
            std::string output;
            if (!mc.config.empty()) {
                std::ifstream in(mc.config);
                if (!in) throw dw::DataError("cannot open '" + mc.config + "'");
                std::stringstream buf;
                buf << in.rdbuf();
                dw::McSpec spec = dw::mc_spec_from_json(buf.str());
                if (mc.seed_set) spec.base_seed = mc.seed;
                const dw::McTable table = dw::run_mc(spec);
                output = dw::emit_table(table, mc.format == "text"
                                                   ? dw::TableFormat::Text
                                                   : dw::TableFormat::Csv);
            } else if (dw::preset_is_curve(mc.preset)) {
                output = dw::emit_curves(dw::curve_preset(mc.preset, mc.reps, mc.seed));
            } else {
                const dw::McTable table =
                    dw::run_mc(dw::mc_preset(mc.preset, mc.reps, mc.seed));
                output = dw::emit_table(table, mc.format == "text"
                                                   ? dw::TableFormat::Text
                                                   : dw::TableFormat::Csv);
            }
            write_output(mc.out, output);
            return kExitOk;
        }
    } catch (const dw::EstimationError& e) {
        std::cerr << "estimation error: " << e.what() << "\n";
        return kExitEstimation;
    } catch (const dw::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
