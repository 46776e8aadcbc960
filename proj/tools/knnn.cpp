// knnn: anomaly scoring over embedding CSVs with the
// nearest-neighbors-of-neighbors operator and its ablation baselines.
//
// Subcommands: synth | build | score | eval | sweep | heatmap.
// Exit codes: 0 success, 1 domain error, 2 usage error.
// Timing goes to stderr; stdout stays machine-parseable.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "knnn/csv.hpp"
#include "knnn/errors.hpp"
#include "knnn/eval.hpp"
#include "knnn/heatmap.hpp"
#include "knnn/model_io.hpp"
#include "knnn/parallel.hpp"
#include "knnn/synth.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct BuildArgs {
    std::string train_path;
    bool has_header = false;
    std::string method = "knnn";
    std::uint32_t k = 3;
    std::uint32_t k_nnn = 25;
    std::uint32_t set_width = 0; // 0 = auto min(5, D)
    std::uint32_t n = 0;         // 0 = all (n = L)
    bool reorder = true;
    unsigned threads = knnn::default_threads();
    std::string out_path = "model.knnn";
};

int run_build(const BuildArgs& args) {
    knnn::method_from_string(args.method); // validated; the model file is method-agnostic
    const auto train = knnn::load_csv(args.train_path, args.has_header);
    const auto dim = train.cols();
    const std::uint32_t width =
        args.set_width == 0 ? static_cast<std::uint32_t>(std::min<std::size_t>(5, dim))
                            : args.set_width;
    const std::uint32_t n = args.n == 0 ? width : args.n;

    const auto start = Clock::now();
    knnn::PartitionPlan plan = args.reorder ? knnn::correlation_plan(train, width)
                                            : knnn::identity_plan(dim, width);
    const auto model = knnn::fit(train, std::move(plan), args.k_nnn, n, args.threads);
    const double elapsed = seconds_since(start);

    knnn::save_model(model, args.out_path);
    std::fprintf(stderr, "fit: %.3f s total, %.3f ms/point (%zu points, D=%zu, S=%zu)\n",
                 elapsed, 1e3 * elapsed / static_cast<double>(train.rows()), train.rows(),
                 dim, model.plan.set_count());
    return 0;
}

struct ScoreArgs {
    std::string model_path;
    std::string queries_path;
    bool has_header = false;
    std::string method = "knnn";
    std::uint32_t k = 3;
    std::uint32_t n = 0;
    unsigned threads = knnn::default_threads();
    std::string out_path = "scores.csv";
};

int run_score(const ScoreArgs& args) {
    const auto model = knnn::load_model(args.model_path);
    const auto queries = knnn::load_csv(args.queries_path, args.has_header);
    if (queries.cols() != model.train.cols())
        throw knnn::PlanMismatch("queries are " + std::to_string(queries.cols()) +
                                 "-D but the model is " +
                                 std::to_string(model.train.cols()) + "-D");

    knnn::ScoreConfig config;
    config.method = knnn::method_from_string(args.method);
    config.k = args.k;
    config.k_nnn = model.k_nnn;
    config.n = args.n;
    config.set_width = model.plan.set_width;

    const knnn::Scorer scorer(model, config);
    const auto start = Clock::now();
    const auto report = scorer.score_matrix(queries, args.threads);
    const double elapsed = seconds_since(start);

    knnn::save_scores(report.scores, args.out_path);
    std::fprintf(stderr, "score: %.4f ms/query mean (%zu queries)\n",
                 1e3 * elapsed / static_cast<double>(queries.rows()), queries.rows());
    return 0;
}

int run_eval(const std::string& scores_path, const std::string& labels_path) {
    const auto scores = knnn::load_scores(scores_path);
    const auto labels = knnn::load_labels(labels_path);
    const auto result = knnn::eval::auroc(scores, labels);
    std::printf("%.4f\n", result.auroc);
    return 0;
}

struct SynthArgs {
    std::string shape;
    std::size_t n_train = 250;
    std::size_t n_test = 5000;
    double noise = 0.05;
    std::uint64_t seed = 1;
    std::string out_prefix;
};

int run_synth(const SynthArgs& args) {
    knnn::synth::SynthSpec spec;
    spec.shape = knnn::synth::shape_from_string(args.shape);
    spec.noise = args.noise;
    spec.seed = args.seed;
    const auto [train, test] = knnn::synth::make_benchmark(spec, args.n_train, args.n_test);

    const std::string prefix = args.out_prefix.empty() ? args.shape : args.out_prefix;
    knnn::save_csv(train, prefix + "_train.csv");
    knnn::save_csv(test.features, prefix + "_test.csv");
    knnn::save_labels(test.labels, prefix + "_labels.csv");
    std::fprintf(stderr, "synth: wrote %s_{train,test,labels}.csv (%zu train, %zu test)\n",
                 prefix.c_str(), train.rows(), test.features.rows());
    return 0;
}

struct SweepArgs {
    std::string train_path;
    std::string test_path;
    std::string labels_path;
    bool has_header = false;
    std::string grid;
    std::string out_path;
    unsigned threads = knnn::default_threads();
};

// Grid spec: semicolon-separated "method[:key=value,...]" entries with
// keys k, k_nnn, L, n, reorder. Example: "knn:k=75; knnn:k=3,k_nnn=25".
std::vector<knnn::ScoreConfig> parse_grid(const std::string& grid) {
    std::vector<knnn::ScoreConfig> configs;
    std::size_t pos = 0;
    auto trim = [](const std::string& s) {
        const auto a = s.find_first_not_of(" \t");
        const auto b = s.find_last_not_of(" \t");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (pos <= grid.size()) {
        const std::size_t semi = grid.find(';', pos);
        std::string entry = trim(grid.substr(pos, semi == std::string::npos
                                                      ? std::string::npos
                                                      : semi - pos));
        pos = semi == std::string::npos ? grid.size() + 1 : semi + 1;
        if (entry.empty()) continue;

        knnn::ScoreConfig config;
        const std::size_t colon = entry.find(':');
        config.method = knnn::method_from_string(trim(entry.substr(0, colon)));
        if (colon != std::string::npos) {
            std::string params = entry.substr(colon + 1);
            std::size_t p = 0;
            while (p <= params.size()) {
                const std::size_t comma = params.find(',', p);
                std::string kv = trim(params.substr(
                    p, comma == std::string::npos ? std::string::npos : comma - p));
                p = comma == std::string::npos ? params.size() + 1 : comma + 1;
                if (kv.empty()) continue;
                const std::size_t eq = kv.find('=');
                if (eq == std::string::npos)
                    throw knnn::BadSpec("grid: expected key=value, got '" + kv + "'");
                const std::string key = trim(kv.substr(0, eq));
                const auto value = static_cast<std::uint32_t>(
                    std::stoul(trim(kv.substr(eq + 1))));
                if (key == "k")
                    config.k = value;
                else if (key == "k_nnn")
                    config.k_nnn = value;
                else if (key == "L")
                    config.set_width = value;
                else if (key == "n")
                    config.n = value;
                else if (key == "reorder")
                    config.reorder = value != 0;
                else
                    throw knnn::BadSpec("grid: unknown key '" + key + "'");
            }
        }
        configs.push_back(config);
    }
    if (configs.empty()) throw knnn::BadSpec("grid: no configurations given");
    return configs;
}

int run_sweep(const SweepArgs& args) {
    // A malformed grid string is a usage problem, not a data problem.
    std::vector<knnn::ScoreConfig> configs;
    try {
        configs = parse_grid(args.grid);
    } catch (const std::exception& e) {
        std::cerr << "usage error: --grid: " << e.what() << "\n";
        return 2;
    }
    const auto train = knnn::load_csv(args.train_path, args.has_header);
    knnn::LabeledSet test;
    test.features = knnn::load_csv(args.test_path, args.has_header);
    test.labels = knnn::load_labels(args.labels_path);

    const auto rows = knnn::eval::sweep(train, test, configs, args.threads);
    const std::string csv = knnn::eval::sweep_csv(rows);
    if (args.out_path.empty()) {
        std::fputs(csv.c_str(), stdout);
    } else {
        std::ofstream out(args.out_path, std::ios::binary);
        if (!out) throw knnn::EmptyInput("cannot open " + args.out_path);
        out << csv;
    }
    return 0;
}

struct HeatmapArgs {
    std::string model_path;
    std::string method = "knnn";
    std::uint32_t k = 3;
    std::uint32_t n = 0;
    std::vector<double> bbox; // x0,y0,x1,y1; empty = auto
    std::string res = "200x200";
    unsigned threads = knnn::default_threads();
    std::string out_prefix = "heatmap";
};

int run_heatmap(const HeatmapArgs& args) {
    const auto model = knnn::load_model(args.model_path);

    knnn::Box box;
    if (args.bbox.empty()) {
        if (model.train.cols() != 2)
            throw knnn::DimensionError("heatmap: model must be 2-D");
        box.lo = {model.train.row(0)[0], model.train.row(0)[1]};
        box.hi = box.lo;
        for (std::size_t i = 0; i < model.train.rows(); ++i) {
            const auto row = model.train.row(i);
            for (std::size_t d = 0; d < 2; ++d) {
                box.lo[d] = std::min(box.lo[d], row[d]);
                box.hi[d] = std::max(box.hi[d], row[d]);
            }
        }
        box = box.expanded(0.2);
    } else {
        box.lo = {args.bbox[0], args.bbox[1]};
        box.hi = {args.bbox[2], args.bbox[3]};
    }

    std::uint32_t width = 0, height = 0;
    if (std::sscanf(args.res.c_str(), "%ux%u", &width, &height) != 2 || width == 0 ||
        height == 0)
        throw knnn::BadSpec("heatmap: --res must be WxH, got '" + args.res + "'");

    knnn::ScoreConfig config;
    config.method = knnn::method_from_string(args.method);
    config.k = args.k;
    config.k_nnn = model.k_nnn;
    config.n = args.n;
    config.set_width = model.plan.set_width;

    const auto grid = knnn::render_heatmap(model, config, box, width, height, args.threads);
    knnn::write_heatmap_csv(grid, args.out_prefix + ".csv");
    knnn::write_heatmap_pgm(grid, args.out_prefix + ".pgm");
    std::fprintf(stderr, "heatmap: wrote %s.csv and %s.pgm (%ux%u)\n",
                 args.out_prefix.c_str(), args.out_prefix.c_str(), width, height);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"k-NNN anomaly detection over embedding CSVs"};
    app.require_subcommand(1);

    BuildArgs build_args;
    auto* build = app.add_subcommand("build", "fit a model from a training CSV");
    build->add_option("--train", build_args.train_path, "training embeddings CSV")
        ->required();
    build->add_flag("--has-header", build_args.has_header, "skip one header row");
    build->add_option("--method", build_args.method, "knn|global|local|knnn");
    build->add_option("--k", build_args.k, "query neighbor count (scoring-time default)")
        ->check(CLI::PositiveNumber);
    build->add_option("--k-nnn", build_args.k_nnn, "neighbors-of-neighbors count")
        ->check(CLI::Range(2u, 1000000u));
    build->add_option("--L", build_args.set_width, "feature set width (default min(5, D))")
        ->check(CLI::PositiveNumber);
    build->add_option("--n", build_args.n, "eigenpairs kept per set (default all)")
        ->check(CLI::PositiveNumber);
    build->add_flag("--reorder,!--no-reorder", build_args.reorder,
                    "correlation-based feature reordering (default on)");
    build->add_option("--threads", build_args.threads)->check(CLI::PositiveNumber);
    build->add_option("--out", build_args.out_path, "model file path");

    ScoreArgs score_args;
    auto* score = app.add_subcommand("score", "score query rows against a model");
    score->add_option("--model", score_args.model_path)->required();
    score->add_option("--queries", score_args.queries_path)->required();
    score->add_flag("--has-header", score_args.has_header);
    score->add_option("--method", score_args.method, "knn|global|local|knnn");
    score->add_option("--k", score_args.k)->check(CLI::PositiveNumber);
    score->add_option("--n", score_args.n, "eigenpairs used (default all stored)")
        ->check(CLI::PositiveNumber);
    score->add_option("--threads", score_args.threads)->check(CLI::PositiveNumber);
    score->add_option("--out", score_args.out_path, "output scores CSV");

    std::string eval_scores, eval_labels;
    auto* eval_cmd = app.add_subcommand("eval", "AUROC of a score file against labels");
    eval_cmd->add_option("--scores", eval_scores)->required();
    eval_cmd->add_option("--labels", eval_labels)->required();

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "generate a synthetic benchmark");
    synth->add_option("--shape", synth_args.shape,
                      "moons|circles|swissroll|threelines|twoarcs|fig6")
        ->required();
    synth->add_option("--n-train", synth_args.n_train)->check(CLI::PositiveNumber);
    synth->add_option("--n-test", synth_args.n_test)->check(CLI::PositiveNumber);
    synth->add_option("--noise", synth_args.noise)->check(CLI::NonNegativeNumber);
    synth->add_option("--seed", synth_args.seed);
    synth->add_option("--out-prefix", synth_args.out_prefix, "default: shape name");

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "AUROC table over a config grid");
    sweep->add_option("--train", sweep_args.train_path)->required();
    sweep->add_option("--test", sweep_args.test_path)->required();
    sweep->add_option("--labels", sweep_args.labels_path)->required();
    sweep->add_flag("--has-header", sweep_args.has_header);
    sweep->add_option("--grid", sweep_args.grid,
                      "e.g. \"knn:k=75; knnn:k=3,k_nnn=25\"")
        ->required();
    sweep->add_option("--out", sweep_args.out_path, "CSV path (default stdout)");
    sweep->add_option("--threads", sweep_args.threads)->check(CLI::PositiveNumber);

    HeatmapArgs heatmap_args;
    auto* heatmap = app.add_subcommand("heatmap", "dense 2-D score grid (CSV + PGM)");
    heatmap->add_option("--model", heatmap_args.model_path)->required();
    heatmap->add_option("--method", heatmap_args.method, "knn|global|local|knnn");
    heatmap->add_option("--k", heatmap_args.k)->check(CLI::PositiveNumber);
    heatmap->add_option("--n", heatmap_args.n)->check(CLI::PositiveNumber);
    heatmap->add_option("--bbox", heatmap_args.bbox,
                        "x0,y0,x1,y1 (default: train bounds + 20%)")
        ->delimiter(',')
        ->expected(4);
    heatmap->add_option("--res", heatmap_args.res, "WxH (default 200x200)");
    heatmap->add_option("--threads", heatmap_args.threads)->check(CLI::PositiveNumber);
    heatmap->add_option("--out-prefix", heatmap_args.out_prefix);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        std::cerr << "run with --help for usage\n";
        return 2;
    }

    try {
        if (build->parsed()) return run_build(build_args);
        if (score->parsed()) return run_score(score_args);
        if (eval_cmd->parsed()) return run_eval(eval_scores, eval_labels);
        if (synth->parsed()) return run_synth(synth_args);
        if (sweep->parsed()) return run_sweep(sweep_args);
        if (heatmap->parsed()) return run_heatmap(heatmap_args);
    } catch (const knnn::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
