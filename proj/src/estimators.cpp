#include "bkernn/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "bkernn/rng.hpp"

namespace bkernn::estimators {

Vector predict(const ModelState& model, const Matrix& X_new) {
    if (X_new.cols() != model.X_train.cols())
        throw std::invalid_argument("predict: column count mismatch with stored model");
    const Matrix K = kernels::cross_kernel(model.X_train, X_new, model.W, model.kernel);
    return (K * model.alpha).array() + model.c;
}

Vector bkrr_fit_predict(const Matrix& X, const Vector& Y, const Matrix& X_new, double lambda) {
    const Matrix K = kernels::mdb_kernel_matrix(X);
    const ridge::RidgeSolution sol = ridge::solve_inner(K, Y, lambda);
    const Matrix Kc = kernels::mdb_cross_kernel(X, X_new);
    return (Kc * sol.alpha).array() + sol.c;
}

ReluNetState relunn_init(Eigen::Index d, Eigen::Index m, std::uint64_t seed) {
    Rng rng(seed);
    ReluNetState st;
    st.hidden_weights = rng.normal_matrix(m, d, 1.0 / std::sqrt(static_cast<double>(d)));
    st.hidden_bias = Vector(m);
    for (Eigen::Index j = 0; j < m; ++j) st.hidden_bias(j) = rng.uniform(-1.0, 1.0);
    st.output_weights = rng.normal_vector(m, 1.0 / std::sqrt(static_cast<double>(m)));
    st.output_bias = 0.0;
    return st;
}

Vector relunn_predict(const ReluNetState& state, const Matrix& X) {
    const Matrix H = ((X * state.hidden_weights.transpose()).rowwise() +
                      state.hidden_bias.transpose())
                         .cwiseMax(0.0);
    return (H * state.output_weights).array() + state.output_bias;
}

double relunn_loss(const ReluNetState& state, const Matrix& X, const Vector& Y) {
    return (relunn_predict(state, X) - Y).squaredNorm() / (2.0 * static_cast<double>(Y.size()));
}

ReluNetState relunn_fit(const Matrix& X, const Vector& Y, const ReluNetState& state0,
                        std::uint64_t seed) {
    const Eigen::Index n = X.rows();
    if (state0.batch_size > n) throw std::invalid_argument("relunn_fit: batch larger than data");
    ReluNetState st = state0;
    Rng rng(seed);
    const Eigen::Index b = st.batch_size;
    Matrix Xb(b, X.cols());
    Vector Yb(b);
    for (int step = 0; step < st.n_steps; ++step) {
        for (Eigen::Index r = 0; r < b; ++r) {
            const Eigen::Index idx = static_cast<Eigen::Index>(rng.below(n));
            Xb.row(r) = X.row(idx);
            Yb(r) = Y(idx);
        }
        // forward
        const Matrix pre = (Xb * st.hidden_weights.transpose()).rowwise() +
                           st.hidden_bias.transpose();       // b x m
        const Matrix H = pre.cwiseMax(0.0);                  // b x m
        const Vector pred = (H * st.output_weights).array() + st.output_bias;
        const Vector resid = pred - Yb;                      // b
        if (!resid.allFinite()) throw std::runtime_error("relunn_fit: loss diverged");
        // backward; ReLU derivative is 0 at 0
        const double scale = 1.0 / static_cast<double>(b);
        const Vector grad_out_w = scale * (H.transpose() * resid);
        const double grad_out_b = scale * resid.sum();
        const Matrix mask = (pre.array() > 0.0).cast<double>();
        const Matrix delta =
            (resid * st.output_weights.transpose()).cwiseProduct(mask);  // b x m
        const Matrix grad_hw = scale * (delta.transpose() * Xb);
        const Vector grad_hb = scale * delta.colwise().sum().transpose();

        st.hidden_weights -= st.step_size * grad_hw;
        st.hidden_bias -= st.step_size * grad_hb;
        st.output_weights -= st.step_size * grad_out_w;
        st.output_bias -= st.step_size * grad_out_b;
    }
    return st;
}

CvResult cross_validate(const Matrix& X, const Vector& Y, const TrainConfig& cfg_base,
                        const std::vector<double>& lambda_grid, int k_folds, std::uint64_t seed) {
    if (k_folds < 2) throw std::invalid_argument("cross_validate: need k_folds >= 2");
    if (lambda_grid.empty()) throw std::invalid_argument("cross_validate: empty grid");
    const Eigen::Index n = X.rows();

    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    Rng rng(seed);
    rng.shuffle(order);

    // Contiguous chunks of the shuffled order.
    std::vector<std::vector<Eigen::Index>> folds(k_folds);
    for (Eigen::Index i = 0; i < n; ++i)
        folds[static_cast<std::size_t>(i % k_folds)].push_back(order[i]);
    for (const auto& fold : folds)
        if (fold.size() < 2) throw std::invalid_argument("cross_validate: fold with < 2 points");

    CvResult result;
    result.grid = lambda_grid;
    result.fold_scores.assign(lambda_grid.size(), std::vector<double>(k_folds, 0.0));

    for (int f = 0; f < k_folds; ++f) {
        const auto& val_idx = folds[f];
        std::vector<Eigen::Index> train_idx;
        for (int g = 0; g < k_folds; ++g)
            if (g != f) train_idx.insert(train_idx.end(), folds[g].begin(), folds[g].end());

        Matrix Xtr(train_idx.size(), X.cols()), Xva(val_idx.size(), X.cols());
        Vector Ytr(train_idx.size()), Yva(val_idx.size());
        for (std::size_t i = 0; i < train_idx.size(); ++i) {
            Xtr.row(i) = X.row(train_idx[i]);
            Ytr(i) = Y(train_idx[i]);
        }
        for (std::size_t i = 0; i < val_idx.size(); ++i) {
            Xva.row(i) = X.row(val_idx[i]);
            Yva(i) = Y(val_idx[i]);
        }

        for (std::size_t g = 0; g < lambda_grid.size(); ++g) {
            TrainConfig cfg = cfg_base;
            cfg.lambda = lambda_grid[g];
            const auto [model, report] = trainer::fit(Xtr, Ytr, cfg);
            const Vector pred = predict(model, Xva);
            const double mse = (pred - Yva).squaredNorm() / static_cast<double>(Yva.size());
            result.fold_scores[g][f] = -mse;
        }
    }

    double best_score = -std::numeric_limits<double>::infinity();
    double best_lambda = lambda_grid.front();
    for (std::size_t g = 0; g < lambda_grid.size(); ++g) {
        const auto& scores = result.fold_scores[g];
        const double mean = std::accumulate(scores.begin(), scores.end(), 0.0) /
                            static_cast<double>(scores.size());
        if (mean > best_score || (mean == best_score && lambda_grid[g] > best_lambda)) {
            best_score = mean;
            best_lambda = lambda_grid[g];
        }
    }
    result.best_lambda = best_lambda;
    return result;
}

namespace {

constexpr int kModelVersion = 1;

void write_matrix(std::ostream& out, const char* name, const Matrix& M) {
    out << name << ' ' << M.rows() << ' ' << M.cols() << '\n';
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            if (j) out << ' ';
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", M(i, j));
            out << buf;
        }
        out << '\n';
    }
}

Matrix read_matrix(std::istream& in, const std::string& expected) {
    std::string name;
    Eigen::Index rows = 0, cols = 0;
    in >> name >> rows >> cols;
    if (name != expected || rows < 0 || cols < 0)
        throw std::runtime_error("model file: expected block '" + expected + "'");
    Matrix M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            if (!(in >> M(i, j))) throw std::runtime_error("model file: truncated matrix");
    return M;
}

}  // namespace

void save_model(const ModelState& model, std::ostream& out) {
    char buf[40];
    out << "bkernn-model v" << kModelVersion << '\n';
    out << "kernel " << kernels::to_string(model.kernel) << '\n';
    out << "penalty " << penalties::to_string(model.config.penalty.tag) << '\n';
    std::snprintf(buf, sizeof buf, "%.17g", model.config.penalty.s);
    out << "s " << buf << '\n';
    out << "m " << model.config.m << '\n';
    std::snprintf(buf, sizeof buf, "%.17g", model.config.lambda);
    out << "lambda " << buf << '\n';
    std::snprintf(buf, sizeof buf, "%.17g", model.config.gamma0);
    out << "gamma0 " << buf << '\n';
    out << "n_iter " << model.config.n_iter << '\n';
    out << "seed " << model.config.seed << '\n';
    std::snprintf(buf, sizeof buf, "%.17g", model.c);
    out << "c " << buf << '\n';
    write_matrix(out, "W", model.W);
    write_matrix(out, "alpha", model.alpha);
    write_matrix(out, "X_train", model.X_train);
}

void save_model_file(const ModelState& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open model file for writing: " + path);
    save_model(model, out);
}

ModelState load_model(std::istream& in) {
    std::string magic, version;
    in >> magic >> version;
    if (magic != "bkernn-model" || version != "v1")
        throw std::runtime_error("not a bkernn model file");
    ModelState model;
    std::string key, value;
    in >> key >> value;
    if (key != "kernel") throw std::runtime_error("model file: missing kernel");
    model.kernel = kernels::kernel_from_string(value);
    model.config.kernel = model.kernel;
    in >> key >> value;
    if (key != "penalty") throw std::runtime_error("model file: missing penalty");
    model.config.penalty.tag = penalties::penalty_from_string(value);
    in >> key >> model.config.penalty.s;
    in >> key >> model.config.m;
    in >> key >> model.config.lambda;
    in >> key >> model.config.gamma0;
    in >> key >> model.config.n_iter;
    in >> key >> model.config.seed;
    in >> key >> model.c;
    model.W = read_matrix(in, "W");
    model.alpha = read_matrix(in, "alpha").col(0);
    model.X_train = read_matrix(in, "X_train");
    if (!in) throw std::runtime_error("model file: truncated");
    return model;
}

ModelState load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    return load_model(in);
}

}  // namespace bkernn::estimators
