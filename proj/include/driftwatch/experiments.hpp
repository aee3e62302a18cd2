#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "driftwatch/changepoint.hpp"
#include "driftwatch/model.hpp"
#include "driftwatch/optim.hpp"
#include "driftwatch/simulate.hpp"

namespace driftwatch {

struct ParamSpec {
    std::vector<double> theta;
    double sigma = 1.0;
};

struct ChangeSpec {
    std::vector<double> theta;
    double sigma = 1.0;
    double change_frac = 0.5;
};

// One Monte Carlo experiment: per replication a path is simulated (with the
// optional parameter change and contamination), then every configured test is
// run on that same path, so cross-test comparisons are paired.
struct McSpec {
    std::string model = "ou-centered";
    std::vector<std::size_t> n_list;
    int reps = 1000;
    double gamma = 0.75;           // h = n^-gamma
    int substeps = 20;
    double x0 = 0.0;
    ParamSpec null_params{{1.0}, 1.0};
    std::optional<ChangeSpec> alt_params;           // power runs switch to these
    std::optional<ContaminationSpec> contamination;
    std::vector<double> alphas;                     // exponents for the trimmed tests
    std::vector<TrimSpec> trims;
    bool include_naive = true;                      // the untrimmed alpha=0 test
    double level = 0.05;
    std::uint64_t base_seed = 0;
    OptimizerConfig optimizer;
};

struct McCellKey {
    std::size_t n = 0;
    std::string test;   // "Tn", "T1" (hard clip), "T2" (tent)
    double alpha = 0.0; // 0 for the naive test
    double m = 0.0;     // truncation constant; 0 for the naive test

    friend bool operator==(const McCellKey&, const McCellKey&) = default;
};

struct McCell {
    double reject_rate = 0.0;
    double mc_stderr = 0.0;
    int failures = 0;  // replications whose fit or scan failed
    int reps = 0;
};

struct McTable {
    std::vector<std::pair<McCellKey, McCell>> cells;  // sorted by key

    const McCell* find(const McCellKey& key) const;
};

// Runs the experiment. Replications execute on worker_count() threads; the
// result is byte-identical for a fixed spec regardless of the worker count,
// since replication r always draws from seed derive_seed(base_seed, n, r, .).
McTable run_mc(const McSpec& spec);

enum class TableFormat { Csv, Text };

// CSV (machine, lossless round-trip) or aligned text (human; cells whose
// failure share exceeds 1% are flagged with '*').
std::string emit_table(const McTable& table, TableFormat format);
McTable parse_table_csv(const std::string& csv);

// Size/power curves over a grid of contamination probabilities ("p") or
// post-change dispersions ("sigma1"). All grid points reuse the same base
// seed, so curves are coupled across the axis.
struct CurveSpec {
    std::string axis;  // "p" or "sigma1"
    std::vector<double> grid;
    McSpec spec;
};

// Long-format CSV: axis,x,n,test,alpha,M,reject_rate,mc_stderr.
std::string emit_curves(const CurveSpec& spec);

// JSON (de)serialization mirroring the field names above.
McSpec mc_spec_from_json(const std::string& json_text);
std::string mc_spec_to_json(const McSpec& spec);

// Ready-made configurations of the library's standard experiments:
// table1..table6 (run_mc) and fig1/fig2 (emit_curves). Throws
// std::invalid_argument for unknown names.
bool preset_is_curve(const std::string& name);
McSpec mc_preset(const std::string& name, int reps, std::uint64_t seed);
CurveSpec curve_preset(const std::string& name, int reps, std::uint64_t seed);

}  // namespace driftwatch
