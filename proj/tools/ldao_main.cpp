#include "ldao/augment.hpp"
#include "ldao/csv.hpp"
#include "ldao/dataset.hpp"
#include "ldao/errors.hpp"
#include "ldao/harness.hpp"
#include "ldao/kmeans.hpp"
#include "ldao/metrics.hpp"
#include "ldao/standardize.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Shared --input/--target/--delimiter/--no-header block. The target column
// can be picked by name or by zero-based index; exactly one selector.
struct InputOptions {
    std::string path;
    std::string target_name;
    int target_index = 0;
    std::string delimiter = ",";
    bool no_header = false;
    CLI::Option* index_option = nullptr;
};

void add_input_options(CLI::App* sub, InputOptions& io) {
    sub->add_option("--input", io.path, "input CSV file")
        ->required()
        ->check(CLI::ExistingFile);
    auto* selector = sub->add_option_group("target", "target column selection");
    selector->add_option("--target", io.target_name, "target column name");
    io.index_option =
        selector->add_option("--target-index", io.target_index, "zero-based target column index");
    selector->require_option(1);
    sub->add_option("--delimiter", io.delimiter, "field delimiter, a single character")
        ->capture_default_str();
    sub->add_flag("--no-header", io.no_header, "treat the first row as data, not column names");
}

ldao::CsvSchema make_schema(const InputOptions& io) {
    if (io.delimiter.size() != 1)
        throw ldao::ValidationError("delimiter must be a single character");
    ldao::CsvSchema schema;
    schema.delimiter = io.delimiter[0];
    schema.has_header = !io.no_header;
    if (io.index_option != nullptr && io.index_option->count() > 0)
        schema.target = io.target_index;
    else
        schema.target = io.target_name;
    return schema;
}

void add_cluster_options(CLI::App* sub, ldao::RunConfig& config) {
    sub->add_option("--k-min", config.k_min, "smallest cluster count to try")
        ->capture_default_str();
    sub->add_option("--k-max", config.k_max, "largest cluster count to try")
        ->capture_default_str();
    sub->add_option("--elbow-threshold", config.elbow_threshold,
                    "relative SSE improvement below which the sweep stops paying")
        ->capture_default_str();
    sub->add_option("--seed", config.seed, "root seed; every random stream derives from it")
        ->capture_default_str();
    sub->add_option("--restarts", config.restarts, "independent k-means starts per K")
        ->capture_default_str();
    sub->add_option("--max-iterations", config.max_iterations, "Lloyd iteration cap")
        ->capture_default_str();
    sub->add_option("--tolerance", config.tolerance,
                    "centroid displacement below which k-means stops")
        ->capture_default_str();
}

void add_sampling_options(CLI::App* sub, ldao::RunConfig& config) {
    const std::map<std::string, ldao::AlphaMode> modes{
        {"uniform", ldao::AlphaMode::uniform},
        {"adaptive", ldao::AlphaMode::adaptive},
    };
    sub->add_option("--alpha", config.alpha, "uniform growth multiplier per cluster")
        ->capture_default_str();
    sub->add_option("--alpha-mode", config.alpha_mode, "growth rule: uniform or adaptive")
        ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
    sub->add_option("--alpha-max", config.alpha_max, "adaptive mode growth cap")
        ->capture_default_str();
    sub->add_option("--gamma", config.gamma, "adaptive mode size-ratio exponent")
        ->capture_default_str();
    sub->add_option("--bandwidth-scale", config.bandwidth_scale, "KDE bandwidth multiplier")
        ->capture_default_str();
    sub->add_flag("--clip-to-range", config.clip_to_range,
                  "clamp synthetic values to each column's observed range");
}

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return std::isspace(c) == 0; };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

// Applies "key = value" lines to the subcommand's long options. Options given
// on the command line keep precedence; '#' starts a comment.
void apply_config_file(CLI::App* sub, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ldao::IoError("cannot open \"" + path + "\"");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const std::string where = path + ":" + std::to_string(lineno);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ldao::ValidationError(where + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (opt == nullptr) throw ldao::ValidationError(where + ": unknown key \"" + key + "\"");
        if (opt->count() > 0) continue;
        try {
            opt->add_result(value);
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw ldao::ValidationError(where + ": " + e.what());
        }
    }
}

// Writes `text` to the file when a path is given, to `fallback` otherwise.
void emit_text(const std::string& text, const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
        fallback << text;
        fallback.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ldao::IoError("cannot open \"" + path + "\" for writing");
    out << text;
    if (!out.flush()) throw ldao::IoError("failed writing \"" + path + "\"");
}

std::filesystem::path with_suffix(const std::filesystem::path& input, const char* suffix) {
    return input.parent_path() / (input.stem().string() + suffix);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"LDAO: cluster-local kernel density oversampling for imbalanced regression"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    // --- oversample ---
    auto* over = app.add_subcommand("oversample", "augment a CSV with synthetic rows");
    InputOptions over_io;
    ldao::RunConfig over_config;
    std::string over_output;
    std::string over_report;
    bool mark_synthetic = false;
    add_input_options(over, over_io);
    add_cluster_options(over, over_config);
    add_sampling_options(over, over_config);
    over->add_option("--output", over_output, "augmented CSV path (default: input stem + .ldao.csv)");
    over->add_option("--report", over_report, "run report path (default: stderr)");
    over->add_flag("--mark-synthetic", mark_synthetic, "append a synthetic 0/1 column");
    std::string over_config_file;
    over->add_option("--config", over_config_file,
                     "key = value file with '#' comments; flags override it")
        ->check(CLI::ExistingFile);
    over->callback([&]() {
        if (!over_config_file.empty()) apply_config_file(over, over_config_file);
        const ldao::CsvSchema schema = make_schema(over_io);
        const ldao::Dataset ds = ldao::read_csv(over_io.path, schema);
        const ldao::AugmentedDataset result = ldao::run_ldao(ds, over_config);
        const std::filesystem::path out_path =
            over_output.empty() ? with_suffix(over_io.path, ".ldao.csv")
                                : std::filesystem::path(over_output);
        ldao::write_csv(result.dataset, out_path, mark_synthetic, schema.delimiter);
        emit_text(result.report.to_text(), over_report, std::cerr);
    });

    // --- elbow ---
    auto* elbow = app.add_subcommand("elbow", "print the SSE(K) sweep and selected K*");
    InputOptions elbow_io;
    ldao::RunConfig elbow_config;
    add_input_options(elbow, elbow_io);
    add_cluster_options(elbow, elbow_config);
    elbow->callback([&]() {
        const ldao::CsvSchema schema = make_schema(elbow_io);
        const ldao::Dataset ds = ldao::read_csv(elbow_io.path, schema);
        const auto [scaled, params] = ldao::standardize(ds);
        const Eigen::MatrixXd joint = ldao::to_joint(scaled);

        const Eigen::Index n = joint.rows();
        int k_min = elbow_config.k_min;
        int k_max = elbow_config.k_max;
        if (n < k_min) {
            throw ldao::TooFewPoints("dataset has " + std::to_string(n) +
                                     " rows, fewer than k_min = " + std::to_string(k_min));
        }
        if (k_max > n) {
            k_max = static_cast<int>(n);
            std::cerr << "warning: k_max clamped to " << k_max << " (dataset rows)\n";
        }

        ldao::ElbowTrace trace =
            ldao::sse_curve(joint, k_min, k_max, elbow_config.seed, elbow_config.restarts,
                            elbow_config.max_iterations, elbow_config.tolerance);
        trace.k_star = ldao::select_k(trace, elbow_config.elbow_threshold);
        for (const std::string& note : trace.notes) std::cerr << "warning: " << note << '\n';

        std::printf("K  SSE  delta\n");
        for (const auto& [k, sse] : trace.sse_by_k) {
            const auto delta = trace.deltas.find(k);
            std::printf("%d  %s  %s\n", k, fmt(sse).c_str(),
                        delta == trace.deltas.end() ? "-" : fmt(delta->second).c_str());
        }
        std::printf("k_star = %d\n", trace.k_star);
    });

    // --- evaluate ---
    auto* eval = app.add_subcommand("evaluate", "score predictions with rmse, mae, and sera");
    std::string eval_input;
    std::string eval_true_file;
    std::string eval_pred_file;
    std::string eval_true_col;
    std::string eval_pred_col;
    std::string eval_relevance;
    std::string eval_delimiter = ",";
    bool eval_no_header = false;
    double sera_step = 0.001;
    eval->add_option("--input", eval_input, "one CSV holding both columns")
        ->check(CLI::ExistingFile);
    eval->add_option("--true", eval_true_file, "CSV holding the true targets")
        ->check(CLI::ExistingFile);
    eval->add_option("--pred", eval_pred_file, "CSV holding the predictions")
        ->check(CLI::ExistingFile);
    eval->add_option("--true-col", eval_true_col, "column with true targets");
    eval->add_option("--pred-col", eval_pred_col, "column with predictions");
    eval->add_option("--relevance", eval_relevance,
                     "control point file ('y phi slope' lines); default builds from true targets")
        ->check(CLI::ExistingFile);
    eval->add_option("--sera-step", sera_step, "integration step for sera")->capture_default_str();
    eval->add_option("--delimiter", eval_delimiter, "field delimiter, a single character")
        ->capture_default_str();
    eval->add_flag("--no-header", eval_no_header, "treat the first row as data, not column names");
    eval->callback([&]() {
        if (eval_delimiter.size() != 1)
            throw ldao::ValidationError("delimiter must be a single character");
        ldao::CsvSchema schema;
        schema.delimiter = eval_delimiter[0];
        schema.has_header = !eval_no_header;

        Eigen::VectorXd y_true;
        Eigen::VectorXd y_pred;
        if (!eval_input.empty()) {
            if (eval_true_col.empty() || eval_pred_col.empty()) {
                throw ldao::ValidationError(
                    "--input mode needs both --true-col and --pred-col");
            }
            schema.target = eval_true_col;
            y_true = ldao::read_column(eval_input, schema);
            schema.target = eval_pred_col;
            y_pred = ldao::read_column(eval_input, schema);
        } else if (!eval_true_file.empty() && !eval_pred_file.empty()) {
            schema.target = eval_true_col;  // empty selector is fine for one-column files
            y_true = ldao::read_column(eval_true_file, schema);
            schema.target = eval_pred_col;
            y_pred = ldao::read_column(eval_pred_file, schema);
        } else {
            throw ldao::ValidationError(
                "provide --input with --true-col/--pred-col, or --true and --pred files");
        }

        const ldao::RelevanceFunction relevance =
            eval_relevance.empty() ? ldao::build_relevance(y_true)
                                   : ldao::load_relevance(eval_relevance);
        std::printf("rmse = %s\n", fmt(ldao::rmse(y_true, y_pred)).c_str());
        std::printf("mae = %s\n", fmt(ldao::mae(y_true, y_pred)).c_str());
        std::printf("sera = %s\n", fmt(ldao::sera(y_true, y_pred, relevance, sera_step)).c_str());
    });

    // --- compare ---
    auto* compare = app.add_subcommand("compare",
                                       "cross-validated baseline vs LDAO with a k-NN learner");
    InputOptions cmp_io;
    ldao::RunConfig cmp_config;
    int runs = 1;
    int folds = 5;
    int learner_k = 5;
    double alpha_level = 0.05;
    std::string records_path;
    std::string summary_path;
    add_input_options(compare, cmp_io);
    add_cluster_options(compare, cmp_config);
    add_sampling_options(compare, cmp_config);
    compare->add_option("--runs", runs, "independent shuffles of the fold split")
        ->capture_default_str();
    compare->add_option("--folds", folds, "cross-validation folds per run")->capture_default_str();
    compare->add_option("--learner-k", learner_k, "neighbor count for the k-NN learner")
        ->capture_default_str();
    compare->add_option("--alpha-level", alpha_level, "significance level for the verdicts")
        ->capture_default_str();
    compare->add_option("--records", records_path,
                        "per-fold records CSV (default: input stem + .records.csv)");
    compare->add_option("--summary", summary_path, "summary path (default: stdout)");
    std::string cmp_config_file;
    compare->add_option("--config", cmp_config_file,
                        "key = value file with '#' comments; flags override it")
        ->check(CLI::ExistingFile);
    compare->callback([&]() {
        if (!cmp_config_file.empty()) apply_config_file(compare, cmp_config_file);
        const ldao::CsvSchema schema = make_schema(cmp_io);
        const ldao::Dataset ds = ldao::read_csv(cmp_io.path, schema);
        const ldao::CvPlan plan{runs, folds, cmp_config.seed};
        const ldao::EvaluationReport report =
            ldao::run_experiment(ds, plan, cmp_config, learner_k, alpha_level);
        const std::filesystem::path rec_path =
            records_path.empty() ? with_suffix(cmp_io.path, ".records.csv")
                                 : std::filesystem::path(records_path);
        report.write_records_csv(rec_path);
        emit_text(report.to_text(), summary_path, std::cout);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const ldao::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
