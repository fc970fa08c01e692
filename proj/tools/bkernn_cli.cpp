#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bkernn/datagen.hpp"
#include "bkernn/estimators.hpp"
#include "bkernn/experiments.hpp"
#include "bkernn/metrics.hpp"
#include "bkernn/trainer.hpp"

namespace {

constexpr int kExitBadFlags = 2;
constexpr int kExitDataError = 3;
constexpr int kExitNumericError = 4;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_lambda(const std::string& text) {
    if (text == "auto") return 0.0;  // trainer treats <= 0 as auto
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || !(value > 0.0))
        throw CLI::ValidationError("--lambda", "expected a positive number or 'auto'");
    return value;
}

struct FitFlags {
    std::string data_path, target, out_path = "model.txt", report_path;
    std::string penalty = "basic", kernel = "brownian", lambda_text = "auto";
    long long m = 20, iters = 20;
    double s = 1.0, gamma0 = 500.0;
    std::uint64_t seed = 0;
};

int cmd_fit(const FitFlags& flags) {
    const double lambda_flag = parse_lambda(flags.lambda_text);
    bkernn::datagen::Dataset data;
    try {
        data = bkernn::datagen::load_csv(flags.data_path, flags.target);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDataError;
    }

    bkernn::trainer::TrainConfig cfg;
    try {
        cfg.penalty.tag = bkernn::penalties::penalty_from_string(flags.penalty);
        cfg.kernel = bkernn::kernels::kernel_from_string(flags.kernel);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadFlags;
    }
    cfg.penalty.s = flags.s;
    cfg.m = static_cast<Eigen::Index>(flags.m);
    cfg.lambda = lambda_flag;
    cfg.gamma0 = flags.gamma0;
    cfg.n_iter = static_cast<int>(flags.iters);
    cfg.seed = flags.seed;

    try {
        const auto [model, report] = bkernn::trainer::fit(data.X, data.Y, cfg);
        const double lambda =
            cfg.lambda > 0.0 ? cfg.lambda : bkernn::trainer::auto_lambda(data.X);
        const auto train_pred = bkernn::estimators::predict(model, data.X);

        bkernn::estimators::save_model_file(model, flags.out_path);
        if (!flags.report_path.empty()) {
            std::ofstream out(flags.report_path);
            if (!out) throw std::invalid_argument("cannot write " + flags.report_path);
            out << "iteration,objective,step_size,halvings\n";
            out << "0," << fmt(report.objective_trace[0]) << ",0,0\n";
            for (std::size_t i = 0; i < report.step_trace.size(); ++i)
                out << i + 1 << ',' << fmt(report.objective_trace[i + 1]) << ','
                    << fmt(report.step_trace[i]) << ',' << report.backtrack_counts[i] << '\n';
        }
        std::cout << "lambda " << fmt(lambda) << '\n';
        std::cout << "train_r2 " << fmt(bkernn::metrics::r2_score(data.Y, train_pred)) << '\n';
        std::cout << "model " << flags.out_path << '\n';
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDataError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumericError;
    }
}

struct PredictFlags {
    std::string model_path, data_path, out_path = "predictions.csv", target;
};

int cmd_predict(const PredictFlags& flags) {
    bkernn::trainer::ModelState model;
    bkernn::datagen::Dataset data;
    try {
        model = bkernn::estimators::load_model_file(flags.model_path);
        data = flags.target.empty()
                   ? bkernn::datagen::load_csv(flags.data_path, "")
                   : bkernn::datagen::load_csv(flags.data_path, flags.target);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDataError;
    }

    try {
        const auto pred = bkernn::estimators::predict(model, data.X);
        std::ofstream out(flags.out_path);
        if (!out) throw std::invalid_argument("cannot write " + flags.out_path);
        out << "prediction\n";
        for (Eigen::Index i = 0; i < pred.size(); ++i) out << fmt(pred(i)) << '\n';
        if (!flags.target.empty())
            std::cout << "r2 " << fmt(bkernn::metrics::r2_score(data.Y, pred)) << '\n';
        std::cout << "predictions " << flags.out_path << '\n';
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDataError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumericError;
    }
}

struct ExperimentFlags {
    std::string name, out_dir;
    std::uint64_t seed = 0;
    double scale = 1.0;
    int jobs = 0;
};

int cmd_experiment(const ExperimentFlags& flags, const std::string& command_line) {
    bkernn::experiments::Options opts;
    opts.seed = flags.seed;
    opts.out_dir = flags.out_dir;
    opts.scale = flags.scale;
    opts.jobs = flags.jobs;
    opts.command_line = command_line;
    try {
        if (flags.name == "exp1")
            bkernn::experiments::run_exp1(opts);
        else if (flags.name == "exp2")
            bkernn::experiments::run_exp2(opts);
        else if (flags.name == "exp3")
            bkernn::experiments::run_exp3(opts);
        else if (flags.name == "exp4")
            bkernn::experiments::run_exp4(opts);
        else if (flags.name == "exp5")
            bkernn::experiments::run_exp5(opts);
        else {
            std::cerr << "error: unknown experiment '" << flags.name
                      << "' (expected exp1..exp5)\n";
            return kExitBadFlags;
        }
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDataError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumericError;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"BKerNN: feature-learning kernel regression"};
    app.require_subcommand(1);

    FitFlags fit_flags;
    auto* fit = app.add_subcommand("fit", "Train a model on a CSV dataset");
    fit->add_option("--data", fit_flags.data_path, "training CSV")->required();
    fit->add_option("--target", fit_flags.target, "response column name")->required();
    fit->add_option("--out", fit_flags.out_path, "model output path");
    fit->add_option("--report", fit_flags.report_path, "per-iteration report CSV");
    fit->add_option("--penalty", fit_flags.penalty,
                    "basic|variable|feature|concave-variable|concave-feature");
    fit->add_option("--kernel", fit_flags.kernel, "brownian|exponential|gaussian");
    fit->add_option("--m", fit_flags.m, "particle count")->check(CLI::PositiveNumber);
    fit->add_option("--lambda", fit_flags.lambda_text, "regularisation, number or 'auto'");
    fit->add_option("--s", fit_flags.s, "concavity parameter")->check(CLI::PositiveNumber);
    fit->add_option("--gamma0", fit_flags.gamma0, "initial step size")
        ->check(CLI::PositiveNumber);
    fit->add_option("--iters", fit_flags.iters, "iterations")->check(CLI::PositiveNumber);
    fit->add_option("--seed", fit_flags.seed, "random seed");

    PredictFlags predict_flags;
    auto* predict = app.add_subcommand("predict", "Predict with a saved model");
    predict->add_option("--model", predict_flags.model_path, "model path")->required();
    predict->add_option("--data", predict_flags.data_path, "input CSV")->required();
    predict->add_option("--out", predict_flags.out_path, "predictions CSV path");
    predict->add_option("--target", predict_flags.target, "response column for scoring");

    ExperimentFlags exp_flags;
    auto* experiment = app.add_subcommand("experiment", "Regenerate a batch experiment");
    experiment->add_option("name", exp_flags.name, "exp1|exp2|exp3|exp4|exp5")->required();
    experiment->add_option("--out", exp_flags.out_dir, "output directory")->required();
    experiment->add_option("--seed", exp_flags.seed, "random seed");
    experiment->add_option("--scale", exp_flags.scale, "shrink factor for smoke runs")
        ->check(CLI::PositiveNumber);
    experiment->add_option("--jobs", exp_flags.jobs, "worker count (default: $BKERNN_JOBS)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitBadFlags;
    }

    if (fit->parsed()) {
        try {
            return cmd_fit(fit_flags);
        } catch (const CLI::ValidationError& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kExitBadFlags;
        }
    }
    if (predict->parsed()) return cmd_predict(predict_flags);

    std::ostringstream command_line;
    for (int i = 0; i < argc; ++i) command_line << (i ? " " : "") << argv[i];
    return cmd_experiment(exp_flags, command_line.str());
}
