#include "bkernn/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "bkernn/metrics.hpp"
#include "bkernn/rng.hpp"
#include "bkernn/trainer.hpp"

namespace bkernn::experiments {

namespace {

using datagen::Dataset;
using datagen::Generated;
using datagen::SyntheticSpec;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double mse(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth) {
    return (pred - truth).squaredNorm() / static_cast<double>(truth.size());
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean(const std::vector<double>& v) {
    double total = 0.0;
    for (double x : v) total += x;
    return total / static_cast<double>(v.size());
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
    // splitmix64-style mix so per-task streams do not overlap
    std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (a + 1) + 0xbf58476d1ce4e5b9ull * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

template <typename T>
T scaled(T value, double scale, long long floor_at) {
    return std::max<T>(static_cast<T>(floor_at),
                       static_cast<T>(std::llround(static_cast<double>(value) * scale)));
}

// Runs tasks on a fixed-size pool; each task owns its output slot so the
// result order is independent of scheduling.
void run_tasks(int jobs, std::size_t n_tasks, const std::function<void(std::size_t)>& task) {
    if (jobs <= 1 || n_tasks <= 1) {
        for (std::size_t i = 0; i < n_tasks; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    std::exception_ptr error;
    std::mutex error_mutex;
    const int n_workers = std::min<int>(jobs, static_cast<int>(n_tasks));
    for (int t = 0; t < n_workers; ++t) {
        workers.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n_tasks) return;
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& w : workers) w.join();
    if (error) std::rethrow_exception(error);
}

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<std::string> row) {
        if (row.size() != header_.size())
            throw std::logic_error("CsvTable: row width mismatch");
        rows_.push_back(std::move(row));
    }

    void append(CsvTable&& other) {
        for (auto& row : other.rows_) rows_.push_back(std::move(row));
    }

    void write(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path);
        for (std::size_t j = 0; j < header_.size(); ++j)
            out << header_[j] << (j + 1 < header_.size() ? ',' : '\n');
        for (const auto& row : rows_)
            for (std::size_t j = 0; j < row.size(); ++j)
                out << row[j] << (j + 1 < row.size() ? ',' : '\n');
    }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

class ManifestWriter {
public:
    ManifestWriter(const Options& opts, const std::string& experiment)
        : start_(std::chrono::steady_clock::now()) {
        entries_.emplace_back("manifest-version", "1");
        entries_.emplace_back("experiment", experiment);
        entries_.emplace_back("command", opts.command_line.empty() ? "-" : opts.command_line);
        entries_.emplace_back("seed", std::to_string(opts.seed));
        entries_.emplace_back("scale", fmt(opts.scale));
        entries_.emplace_back("jobs", std::to_string(resolve_jobs(opts.jobs)));
        entries_.emplace_back("rng", Rng::kAlgorithm);
    }

    void set(const std::string& key, const std::string& value) {
        entries_.emplace_back(key, value);
    }
    void artifact(const std::string& path) { entries_.emplace_back("artifact", path); }

    void write(const std::string& dir) {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        std::ofstream out(std::filesystem::path(dir) / "manifest.txt");
        if (!out) throw std::runtime_error("cannot write manifest in " + dir);
        for (const auto& [k, v] : entries_) out << k << ' ' << v << '\n';
        out << "duration_seconds " << fmt(secs) << '\n';
    }

private:
    std::chrono::steady_clock::time_point start_;
    std::vector<std::pair<std::string, std::string>> entries_;
};

std::string ensure_out_dir(const std::string& dir) {
    std::filesystem::create_directories(dir);
    return dir;
}

std::vector<double> lambda_cv_grid(const Eigen::MatrixXd& X) {
    const double base = trainer::auto_lambda(X);
    return {0.05 * base, 0.1 * base, 0.5 * base, 1.0 * base, 1.5 * base};
}

}  // namespace

int resolve_jobs(int jobs) {
    if (jobs > 0) return jobs;
    if (const char* env = std::getenv("BKERNN_JOBS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

Exp1Summary run_exp1(const Options& opts, Exp1Params params) {
    if (opts.scale != 1.0) {
        params.n_train = scaled(params.n_train, opts.scale, 16);
        params.n_test = scaled(params.n_test, opts.scale, 16);
        params.d = scaled(params.d, opts.scale, 2);
        params.k = std::min(params.k, params.d);
        params.final_iters = scaled(params.final_iters, opts.scale, 5);
        params.cv_iters = scaled(params.cv_iters, opts.scale, 3);
        params.n_seeds = scaled(params.n_seeds, opts.scale, 2);
    }
    const std::vector<kernels::ScalarKernelKind> kinds = {
        kernels::ScalarKernelKind::brownian, kernels::ScalarKernelKind::exponential,
        kernels::ScalarKernelKind::gaussian};

    struct TaskResult {
        CsvTable rows{{"kernel", "seed", "lambda", "iteration", "train_mse", "test_mse"}};
        double final_test_mse = 0.0;
    };
    const std::size_t n_tasks = kinds.size() * static_cast<std::size_t>(params.n_seeds);
    std::vector<TaskResult> results(n_tasks);

    run_tasks(resolve_jobs(opts.jobs), n_tasks, [&](std::size_t t) {
        const std::size_t kernel_idx = t / params.n_seeds;
        const int seed_idx = static_cast<int>(t % params.n_seeds);
        const auto kind = kinds[kernel_idx];

        SyntheticSpec spec;
        spec.mechanism = datagen::Mechanism::exp1_abs_sum;
        spec.n_train = params.n_train;
        spec.n_test = params.n_test;
        spec.d = params.d;
        spec.k = params.k;
        spec.noise_std = params.noise_std;
        spec.seed = derive_seed(opts.seed, 1, seed_idx);
        const Generated data = datagen::generate(spec);

        trainer::TrainConfig cfg;
        cfg.m = params.m;
        cfg.kernel = kind;
        cfg.penalty.tag = penalties::PenaltyTag::basic;
        cfg.gamma0 = params.gamma0;
        cfg.n_iter = params.cv_iters;
        cfg.seed = derive_seed(opts.seed, 2, t);

        const auto cv = estimators::cross_validate(data.train.X, data.train.Y, cfg,
                                                   lambda_cv_grid(data.train.X), params.k_folds,
                                                   derive_seed(opts.seed, 3, t));
        cfg.lambda = cv.best_lambda;
        cfg.n_iter = params.final_iters;

        TaskResult& res = results[t];
        const std::string kernel_name = kernels::to_string(kind);
        trainer::IterationObserver observer;
        if (params.record_iterations) {
            observer = [&](int iter, const Eigen::MatrixXd& W,
                           const ridge::RidgeSolution& sol) {
                trainer::ModelState snap;
                snap.W = W;
                snap.alpha = sol.alpha;
                snap.c = sol.c;
                snap.X_train = data.train.X;
                snap.kernel = kind;
                res.rows.add_row({kernel_name, std::to_string(seed_idx), fmt(cv.best_lambda),
                                  std::to_string(iter),
                                  fmt(mse(estimators::predict(snap, data.train.X), data.train.Y)),
                                  fmt(mse(estimators::predict(snap, data.test.X), data.test.Y))});
            };
        }
        const auto [model, report] = trainer::fit(data.train.X, data.train.Y, cfg, observer);
        res.final_test_mse = mse(estimators::predict(model, data.test.X), data.test.Y);
        if (!params.record_iterations)
            res.rows.add_row({kernel_name, std::to_string(seed_idx), fmt(cv.best_lambda),
                              std::to_string(params.final_iters - 1),
                              fmt(mse(estimators::predict(model, data.train.X), data.train.Y)),
                              fmt(res.final_test_mse)});
    });

    Exp1Summary summary;
    for (std::size_t kidx = 0; kidx < kinds.size(); ++kidx) {
        std::vector<double> finals;
        for (int s = 0; s < params.n_seeds; ++s)
            finals.push_back(results[kidx * params.n_seeds + s].final_test_mse);
        summary.median_final_test_mse[kernels::to_string(kinds[kidx])] = median(finals);
    }

    if (!opts.out_dir.empty()) {
        ManifestWriter manifest(opts, "exp1");
        ensure_out_dir(opts.out_dir);
        CsvTable table({"kernel", "seed", "lambda", "iteration", "train_mse", "test_mse"});
        for (auto& res : results) table.append(std::move(res.rows));
        const auto path = (std::filesystem::path(opts.out_dir) / "exp1_iterations.csv").string();
        table.write(path);
        CsvTable summary_table({"kernel", "median_final_test_mse"});
        for (const auto& [kernel, value] : summary.median_final_test_mse)
            summary_table.add_row({kernel, fmt(value)});
        const auto spath = (std::filesystem::path(opts.out_dir) / "exp1_summary.csv").string();
        summary_table.write(spath);
        manifest.set("n_train", std::to_string(params.n_train));
        manifest.set("n_test", std::to_string(params.n_test));
        manifest.set("d", std::to_string(params.d));
        manifest.set("k", std::to_string(params.k));
        manifest.set("m", std::to_string(params.m));
        manifest.set("cv_iters", std::to_string(params.cv_iters));
        manifest.set("final_iters", std::to_string(params.final_iters));
        manifest.set("n_seeds", std::to_string(params.n_seeds));
        manifest.set("gamma0", fmt(params.gamma0));
        manifest.artifact(path);
        manifest.artifact(spath);
        manifest.write(opts.out_dir);
    }
    return summary;
}

void run_exp2(const Options& opts, Exp2Params params) {
    if (opts.scale != 1.0) {
        params.n_train = scaled(params.n_train, opts.scale, 16);
        params.n_test = scaled(params.n_test, opts.scale, 16);
        params.n_iter = scaled(params.n_iter, opts.scale, 5);
    }
    SyntheticSpec spec;
    spec.mechanism = datagen::Mechanism::exp2_abs_coords;
    spec.n_train = params.n_train;
    spec.n_test = params.n_test;
    spec.d = params.d;
    spec.k = params.k;
    spec.noise_std = params.noise_std;
    spec.seed = derive_seed(opts.seed, 10);
    const Generated data = datagen::generate(spec);

    struct Setting {
        std::string name;
        double value;
        Eigen::Index m;
        double lambda;
    };
    std::vector<Setting> settings;
    for (Eigen::Index m : params.m_grid)
        settings.push_back({"m", static_cast<double>(m), m, params.lambda_fixed});
    for (double lambda : params.lambda_grid)
        settings.push_back({"lambda", lambda, params.m_fixed, lambda});

    std::vector<std::vector<std::string>> rows(settings.size());
    run_tasks(resolve_jobs(opts.jobs), settings.size(), [&](std::size_t i) {
        const Setting& s = settings[i];
        trainer::TrainConfig cfg;
        cfg.m = s.m;
        cfg.lambda = s.lambda;
        cfg.gamma0 = params.gamma0;
        cfg.n_iter = params.n_iter;
        cfg.penalty.tag = penalties::PenaltyTag::basic;
        cfg.seed = derive_seed(opts.seed, 11, i);
        const auto [model, report] = trainer::fit(data.train.X, data.train.Y, cfg);
        const auto train_pred = estimators::predict(model, data.train.X);
        const auto test_pred = estimators::predict(model, data.test.X);
        rows[i] = {s.name,
                   fmt(s.value),
                   fmt(mse(train_pred, data.train.Y)),
                   fmt(mse(test_pred, data.test.Y)),
                   fmt(metrics::r2_score(data.train.Y, train_pred)),
                   fmt(metrics::r2_score(data.test.Y, test_pred))};
    });

    if (!opts.out_dir.empty()) {
        ManifestWriter manifest(opts, "exp2");
        ensure_out_dir(opts.out_dir);
        CsvTable table({"setting", "value", "train_mse", "test_mse", "train_r2", "test_r2"});
        for (auto& row : rows) table.add_row(std::move(row));
        const auto path = (std::filesystem::path(opts.out_dir) / "exp2_results.csv").string();
        table.write(path);
        manifest.set("n_train", std::to_string(params.n_train));
        manifest.set("n_iter", std::to_string(params.n_iter));
        manifest.artifact(path);
        manifest.write(opts.out_dir);
    }
}

Exp3Summary run_exp3(const Options& opts, Exp3Params params) {
    if (opts.scale != 1.0) {
        params.n_train = scaled(params.n_train, opts.scale, 16);
        params.n_test = scaled(params.n_test, opts.scale, 16);
        params.n_iter = scaled(params.n_iter, opts.scale, 5);
        params.n_seeds = scaled(params.n_seeds, opts.scale, 2);
    }

    struct TaskResult {
        std::vector<std::vector<std::string>> rows;
        std::vector<double> r2;  // per penalty
    };
    const std::size_t n_tasks =
        params.mechanisms.size() * static_cast<std::size_t>(params.n_seeds);
    std::vector<TaskResult> results(n_tasks);

    run_tasks(resolve_jobs(opts.jobs), n_tasks, [&](std::size_t t) {
        const std::size_t mech_idx = t / params.n_seeds;
        const int seed_idx = static_cast<int>(t % params.n_seeds);
        const datagen::Mechanism mech = params.mechanisms[mech_idx];

        SyntheticSpec spec;
        spec.mechanism = mech;
        spec.n_train = params.n_train;
        spec.n_test = params.n_test;
        spec.d = params.d;
        spec.k = params.k;
        spec.noise_std = params.noise_std;
        spec.seed = derive_seed(opts.seed, 20 + mech_idx, seed_idx);
        const Generated data = datagen::generate(spec);

        TaskResult& res = results[t];
        for (std::size_t p = 0; p < params.penalty_tags.size(); ++p) {
            trainer::TrainConfig cfg;
            cfg.m = params.m;
            cfg.n_iter = params.n_iter;
            cfg.gamma0 = params.gamma0;
            cfg.penalty.tag = params.penalty_tags[p];
            cfg.penalty.s = params.concave_s;
            cfg.seed = derive_seed(opts.seed, 30 + mech_idx, seed_idx * 100 + p);
            const auto [model, report] = trainer::fit(data.train.X, data.train.Y, cfg);
            const auto test_pred = estimators::predict(model, data.test.X);
            const double r2 = metrics::r2_score(data.test.Y, test_pred);
            res.r2.push_back(r2);

            double fscore = std::nan("");
            if (data.P_true && params.k < params.d) {
                const auto basis = metrics::extract_features(model.W, params.k, cfg.penalty);
                fscore = metrics::feature_score(*data.P_true, basis, params.d, params.k);
            }
            res.rows.push_back({datagen::to_string(mech),
                                penalties::to_string(cfg.penalty.tag),
                                std::to_string(seed_idx), fmt(mse(test_pred, data.test.Y)),
                                fmt(r2), fmt(fscore)});
        }
    });

    Exp3Summary summary;
    for (std::size_t mech_idx = 0; mech_idx < params.mechanisms.size(); ++mech_idx) {
        for (std::size_t p = 0; p < params.penalty_tags.size(); ++p) {
            std::vector<double> scores;
            for (int s = 0; s < params.n_seeds; ++s)
                scores.push_back(results[mech_idx * params.n_seeds + s].r2[p]);
            summary.mean_test_r2[{datagen::to_string(params.mechanisms[mech_idx]),
                                  penalties::to_string(params.penalty_tags[p])}] = mean(scores);
        }
    }

    if (!opts.out_dir.empty()) {
        ManifestWriter manifest(opts, "exp3");
        ensure_out_dir(opts.out_dir);
        CsvTable table({"mechanism", "penalty", "seed", "test_mse", "test_r2", "feature_score"});
        for (auto& res : results)
            for (auto& row : res.rows) table.add_row(std::move(row));
        const auto path = (std::filesystem::path(opts.out_dir) / "exp3_results.csv").string();
        table.write(path);
        CsvTable summary_table({"mechanism", "penalty", "mean_test_r2"});
        for (const auto& [key, value] : summary.mean_test_r2)
            summary_table.add_row({key.first, key.second, fmt(value)});
        const auto spath = (std::filesystem::path(opts.out_dir) / "exp3_summary.csv").string();
        summary_table.write(spath);
        manifest.set("n_train", std::to_string(params.n_train));
        manifest.set("m", std::to_string(params.m));
        manifest.set("n_iter", std::to_string(params.n_iter));
        manifest.set("n_seeds", std::to_string(params.n_seeds));
        manifest.set("concave_s", fmt(params.concave_s));
        manifest.artifact(path);
        manifest.artifact(spath);
        manifest.write(opts.out_dir);
    }
    return summary;
}

void run_exp4(const Options& opts, Exp4Params params) {
    if (opts.scale != 1.0) {
        params.n_train = scaled(params.n_train, opts.scale, 16);
        params.n_test = scaled(params.n_test, opts.scale, 16);
        params.relu_steps = scaled(params.relu_steps, opts.scale, 200);
        params.n_iter = scaled(params.n_iter, opts.scale, 5);
    }
    const std::vector<datagen::Mechanism> functions = {datagen::Mechanism::exp4_sine,
                                                       datagen::Mechanism::exp4_square,
                                                       datagen::Mechanism::exp4_triangle};

    struct Task {
        datagen::Mechanism mech;
        std::string method;
        Eigen::Index size;
    };
    std::vector<Task> tasks;
    for (auto mech : functions) {
        for (Eigen::Index m : params.bkernn_m) tasks.push_back({mech, "bkernn", m});
        for (Eigen::Index w : params.relu_widths) tasks.push_back({mech, "relunn", w});
    }
    std::vector<std::vector<std::string>> rows(tasks.size());

    run_tasks(resolve_jobs(opts.jobs), tasks.size(), [&](std::size_t i) {
        const Task& task = tasks[i];
        SyntheticSpec spec;
        spec.mechanism = task.mech;
        spec.n_train = params.n_train;
        spec.n_test = params.n_test;
        spec.d = 1;
        spec.k = 1;
        spec.noise_std = params.noise_std;
        spec.seed = derive_seed(opts.seed, 40, static_cast<std::uint64_t>(task.mech));
        const Generated data = datagen::generate(spec);

        Eigen::VectorXd test_pred;
        if (task.method == "bkernn") {
            trainer::TrainConfig cfg;
            cfg.m = task.size;
            cfg.n_iter = params.n_iter;
            cfg.gamma0 = params.gamma0;
            cfg.penalty.tag = penalties::PenaltyTag::basic;
            cfg.seed = derive_seed(opts.seed, 41, i);
            const auto cv =
                estimators::cross_validate(data.train.X, data.train.Y, cfg, params.cv_grid,
                                           params.k_folds, derive_seed(opts.seed, 42, i));
            cfg.lambda = cv.best_lambda;
            const auto [model, report] = trainer::fit(data.train.X, data.train.Y, cfg);
            test_pred = estimators::predict(model, data.test.X);
        } else {
            auto net = estimators::relunn_init(1, task.size, derive_seed(opts.seed, 43, i));
            net.step_size = params.relu_step_size;
            net.batch_size = std::min<Eigen::Index>(params.relu_batch, params.n_train);
            net.n_steps = params.relu_steps;
            net = estimators::relunn_fit(data.train.X, data.train.Y, net,
                                         derive_seed(opts.seed, 44, i));
            test_pred = estimators::relunn_predict(net, data.test.X);
        }
        rows[i] = {datagen::to_string(task.mech), task.method, std::to_string(task.size),
                   fmt(mse(test_pred, data.test.Y)),
                   fmt(metrics::r2_score(data.test.Y, test_pred))};
    });

    if (!opts.out_dir.empty()) {
        ManifestWriter manifest(opts, "exp4");
        ensure_out_dir(opts.out_dir);
        CsvTable table({"function", "method", "size", "test_mse", "test_r2"});
        for (auto& row : rows) table.add_row(std::move(row));
        const auto path = (std::filesystem::path(opts.out_dir) / "exp4_results.csv").string();
        table.write(path);
        manifest.set("n_train", std::to_string(params.n_train));
        manifest.set("relu_steps", std::to_string(params.relu_steps));
        manifest.artifact(path);
        manifest.write(opts.out_dir);
    }
}

Exp5Summary run_exp5(const Options& opts, Exp5Params params) {
    if (opts.scale != 1.0) {
        for (auto& n : params.n_grid) n = scaled(n, opts.scale, 10);
        params.n_fixed = scaled(params.n_fixed, opts.scale, 16);
        params.n_test = scaled(params.n_test, opts.scale, 16);
        params.n_seeds = scaled(params.n_seeds, opts.scale, 2);
        params.relu_steps = scaled(params.relu_steps, opts.scale, 100);
        params.n_iter = scaled(params.n_iter, opts.scale, 5);
    }

    struct Config {
        std::string sweep;
        Eigen::Index n, d;
        int seed_idx;
    };
    std::vector<Config> configs;
    for (Eigen::Index n : params.n_grid)
        for (int s = 0; s < params.n_seeds; ++s)
            configs.push_back({"n", n, params.d_fixed, s});
    if (params.run_d_sweep)
        for (Eigen::Index d : params.d_grid)
            for (int s = 0; s < params.n_seeds; ++s)
                configs.push_back({"d", params.n_fixed, d, s});

    struct TaskResult {
        std::vector<std::vector<std::string>> rows;
        double bkernn_r2 = 0.0, bkrr_r2 = 0.0;
        double bkernn_fscore = 0.0, relunn_fscore = 0.0;
    };
    std::vector<TaskResult> results(configs.size());

    run_tasks(resolve_jobs(opts.jobs), configs.size(), [&](std::size_t i) {
        const Config& c = configs[i];
        const Eigen::Index k = std::min(params.k, c.d);

        SyntheticSpec spec;
        spec.mechanism = datagen::Mechanism::exp5_abs_sin;
        spec.n_train = c.n;
        spec.n_test = params.n_test;
        spec.d = c.d;
        spec.k = k;
        spec.noise_std = 0.0;
        spec.seed = derive_seed(opts.seed, 50, i);
        const Generated data = datagen::generate(spec);

        TaskResult& res = results[i];
        const auto add_row = [&](const std::string& method, double r2, double fscore) {
            res.rows.push_back({c.sweep, std::to_string(c.n), std::to_string(c.d),
                                std::to_string(c.seed_idx), method, fmt(r2), fmt(fscore)});
        };

        // BKerNN with the feature penalty
        trainer::TrainConfig cfg;
        cfg.m = params.m;
        cfg.n_iter = params.n_iter;
        cfg.gamma0 = params.gamma0;
        cfg.penalty.tag = penalties::PenaltyTag::feature;
        cfg.seed = derive_seed(opts.seed, 51, i);
        const auto [model, report] = trainer::fit(data.train.X, data.train.Y, cfg);
        res.bkernn_r2 =
            metrics::r2_score(data.test.Y, estimators::predict(model, data.test.X));
        res.bkernn_fscore = metrics::feature_score(
            *data.P_true, metrics::extract_features(model.W, k, cfg.penalty), c.d, k);
        add_row("bkernn", res.bkernn_r2, res.bkernn_fscore);

        // BKRR baseline
        const double lambda = trainer::auto_lambda(data.train.X);
        const auto bkrr_pred =
            estimators::bkrr_fit_predict(data.train.X, data.train.Y, data.test.X, lambda);
        res.bkrr_r2 = metrics::r2_score(data.test.Y, bkrr_pred);
        add_row("bkrr", res.bkrr_r2, std::nan(""));

        // ReLU network baseline; features taken from the hidden weights
        auto net = estimators::relunn_init(c.d, params.m, derive_seed(opts.seed, 52, i));
        net.step_size = params.relu_step_size;
        net.batch_size = std::min<Eigen::Index>(params.relu_batch, c.n);
        net.n_steps = params.relu_steps;
        net = estimators::relunn_fit(data.train.X, data.train.Y, net,
                                     derive_seed(opts.seed, 53, i));
        const double relu_r2 =
            metrics::r2_score(data.test.Y, estimators::relunn_predict(net, data.test.X));
        penalties::PenaltyKind spectral;
        spectral.tag = penalties::PenaltyTag::feature;
        res.relunn_fscore = metrics::feature_score(
            *data.P_true,
            metrics::extract_features(net.hidden_weights.transpose(), k, spectral), c.d, k);
        add_row("relunn", relu_r2, res.relunn_fscore);
    });

    Exp5Summary summary;
    {
        std::size_t base = 0;
        for (Eigen::Index n : params.n_grid) {
            std::vector<double> bk_r2, bkrr_r2, bk_fs, relu_fs;
            for (int s = 0; s < params.n_seeds; ++s) {
                const TaskResult& r = results[base + s];
                bk_r2.push_back(r.bkernn_r2);
                bkrr_r2.push_back(r.bkrr_r2);
                bk_fs.push_back(r.bkernn_fscore);
                relu_fs.push_back(r.relunn_fscore);
            }
            summary.bkernn_r2_by_n[n] = mean(bk_r2);
            summary.bkrr_r2_by_n[n] = mean(bkrr_r2);
            summary.bkernn_feature_score_by_n[n] = mean(bk_fs);
            summary.relunn_feature_score_by_n[n] = mean(relu_fs);
            base += params.n_seeds;
        }
    }

    if (!opts.out_dir.empty()) {
        ManifestWriter manifest(opts, "exp5");
        ensure_out_dir(opts.out_dir);
        CsvTable table({"sweep", "n", "d", "seed", "method", "test_r2", "feature_score"});
        for (auto& res : results)
            for (auto& row : res.rows) table.add_row(std::move(row));
        const auto path = (std::filesystem::path(opts.out_dir) / "exp5_results.csv").string();
        table.write(path);
        manifest.set("m", std::to_string(params.m));
        manifest.set("n_iter", std::to_string(params.n_iter));
        manifest.set("n_seeds", std::to_string(params.n_seeds));
        manifest.set("relu_steps", std::to_string(params.relu_steps));
        manifest.artifact(path);
        manifest.write(opts.out_dir);
    }
    return summary;
}

}  // namespace bkernn::experiments
