#include "bkernn/datagen.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "bkernn/rng.hpp"

namespace bkernn::datagen {

std::string to_string(Mechanism mech) {
    switch (mech) {
        case Mechanism::exp1_abs_sum: return "exp1_abs_sum";
        case Mechanism::exp2_abs_coords: return "exp2_abs_coords";
        case Mechanism::exp3_none: return "exp3_none";
        case Mechanism::exp3_variables: return "exp3_variables";
        case Mechanism::exp3_features: return "exp3_features";
        case Mechanism::exp4_sine: return "exp4_sine";
        case Mechanism::exp4_square: return "exp4_square";
        case Mechanism::exp4_triangle: return "exp4_triangle";
        case Mechanism::exp5_abs_sin: return "exp5_abs_sin";
    }
    return "?";
}

Mechanism mechanism_from_string(const std::string& name) {
    for (Mechanism m :
         {Mechanism::exp1_abs_sum, Mechanism::exp2_abs_coords, Mechanism::exp3_none,
          Mechanism::exp3_variables, Mechanism::exp3_features, Mechanism::exp4_sine,
          Mechanism::exp4_square, Mechanism::exp4_triangle, Mechanism::exp5_abs_sin})
        if (to_string(m) == name) return m;
    throw std::invalid_argument("unknown mechanism: " + name);
}

Matrix sample_orthogonal(Eigen::Index d, Eigen::Index k, std::uint64_t seed) {
    if (k > d || k < 1) throw std::invalid_argument("sample_orthogonal: need 1 <= k <= d");
    Rng rng(seed);
    const Matrix G = rng.normal_matrix(d, d);
    Eigen::HouseholderQR<Matrix> qr(G);
    Matrix Q = qr.householderQ();
    const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fixing the sign of the R diagonal makes the distribution Haar.
    for (Eigen::Index j = 0; j < d; ++j)
        if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
    return Q.leftCols(k);
}

namespace {

bool is_1d_mechanism(Mechanism mech) {
    return mech == Mechanism::exp4_sine || mech == Mechanism::exp4_square ||
           mech == Mechanism::exp4_triangle;
}

bool uses_feature_matrix(Mechanism mech) {
    return mech == Mechanism::exp1_abs_sum || mech == Mechanism::exp3_features ||
           mech == Mechanism::exp5_abs_sin;
}

Vector clean_response(const Matrix& X, Mechanism mech, Eigen::Index k, const Matrix* P) {
    const Eigen::Index n = X.rows(), d = X.cols();
    Vector y(n);
    Matrix proj;
    if (P) proj = X * (*P);  // n x k
    for (Eigen::Index i = 0; i < n; ++i) {
        double v = 0.0;
        switch (mech) {
            case Mechanism::exp1_abs_sum:
                v = 2.0 * M_PI * std::abs(proj.row(i).sum());
                break;
            case Mechanism::exp2_abs_coords:
                for (Eigen::Index a = 0; a < k; ++a) v += std::abs(2.0 * M_PI * X(i, a));
                break;
            case Mechanism::exp3_none:
                for (Eigen::Index a = 0; a < d; ++a) v += std::sin(X(i, a));
                break;
            case Mechanism::exp3_variables:
                for (Eigen::Index a = 0; a < k; ++a) v += std::sin(X(i, a));
                break;
            case Mechanism::exp3_features:
                for (Eigen::Index a = 0; a < k; ++a) v += std::sin(proj(i, a));
                break;
            case Mechanism::exp4_sine:
                v = std::sin(2.0 * M_PI * X(i, 0));
                break;
            case Mechanism::exp4_square: {
                const double sv = std::sin(2.0 * M_PI * X(i, 0));
                v = sv > 0.0 ? 1.0 : (sv < 0.0 ? -1.0 : 0.0);
                break;
            }
            case Mechanism::exp4_triangle: {
                const double u = X(i, 0) + 1.0 - 0.25;
                v = 4.0 * std::abs(u - std::floor(u) - 0.5) - 1.0;
                break;
            }
            case Mechanism::exp5_abs_sin: {
                double acc = 0.0;
                for (Eigen::Index a = 0; a < k; ++a) acc += std::sin(proj(i, a));
                v = std::abs(acc);
                break;
            }
        }
        y(i) = v;
    }
    return y;
}

std::vector<std::string> default_names(Eigen::Index d) {
    std::vector<std::string> names;
    for (Eigen::Index j = 0; j < d; ++j) names.push_back("x" + std::to_string(j));
    return names;
}

}  // namespace

Generated generate(const SyntheticSpec& spec) {
    if (spec.k > spec.d || spec.k < 1) throw std::invalid_argument("generate: need 1 <= k <= d");
    if (is_1d_mechanism(spec.mechanism) && spec.d != 1)
        throw std::invalid_argument("generate: " + to_string(spec.mechanism) + " requires d = 1");
    if (spec.n_train < 2 || spec.n_test < 1)
        throw std::invalid_argument("generate: invalid sample counts");

    Rng rng(spec.seed);
    Generated out;

    Matrix P;
    const Matrix* Pp = nullptr;
    if (uses_feature_matrix(spec.mechanism)) {
        // Derived seed keeps P stable across n/noise changes at fixed seed.
        P = sample_orthogonal(spec.d, spec.k, spec.seed ^ 0x9e3779b97f4a7c15ull);
        Pp = &P;
        out.P_true = metrics::FeatureBasis{P, false};
    } else if (spec.mechanism == Mechanism::exp2_abs_coords ||
               spec.mechanism == Mechanism::exp3_variables) {
        out.P_true = metrics::FeatureBasis{Matrix::Identity(spec.d, spec.d).leftCols(spec.k),
                                           false};
    }

    out.train.X = rng.uniform_matrix(spec.n_train, spec.d, -1.0, 1.0);
    if (is_1d_mechanism(spec.mechanism)) {
        // Equally spaced evaluation grid, as used for the 1-D target plots.
        out.test.X = Matrix(spec.n_test, 1);
        for (Eigen::Index i = 0; i < spec.n_test; ++i)
            out.test.X(i, 0) =
                -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(spec.n_test - 1);
    } else {
        out.test.X = rng.uniform_matrix(spec.n_test, spec.d, -1.0, 1.0);
    }

    out.train.Y = clean_response(out.train.X, spec.mechanism, spec.k, Pp);
    if (spec.noise_std > 0.0)
        out.train.Y += rng.normal_vector(spec.n_train, spec.noise_std);

    out.test.Y = clean_response(out.test.X, spec.mechanism, spec.k, Pp);
    const bool noiseless_test =
        is_1d_mechanism(spec.mechanism) || spec.mechanism == Mechanism::exp5_abs_sin;
    if (!noiseless_test && spec.noise_std > 0.0)
        out.test.Y += rng.normal_vector(spec.n_test, spec.noise_std);

    out.train.column_names = default_names(spec.d);
    out.test.column_names = out.train.column_names;
    out.train.target_name = "y";
    out.test.target_name = "y";
    return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

}  // namespace

Dataset load_csv(const std::string& path, const std::string& target_column) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open CSV file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    const std::vector<std::string> header = split_csv_line(strip_cr(line));
    std::set<std::string> seen;
    for (const auto& name : header)
        if (!seen.insert(name).second)
            throw std::runtime_error(path + ": duplicate header name '" + name + "'");

    Eigen::Index target_idx = -1;
    for (std::size_t j = 0; j < header.size(); ++j)
        if (header[j] == target_column) target_idx = static_cast<Eigen::Index>(j);
    if (target_idx < 0 && !target_column.empty())
        throw std::runtime_error(path + ": target column '" + target_column + "' not found");

    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected " + std::to_string(header.size()) + " cells");
        std::vector<double> row(cells.size());
        for (std::size_t j = 0; j < cells.size(); ++j) {
            std::size_t pos = 0;
            try {
                row[j] = std::stod(cells[j], &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != cells[j].size() || cells[j].empty())
                throw std::runtime_error(path + ":" + std::to_string(lineno) + ": column '" +
                                         header[j] + "': non-numeric cell '" + cells[j] + "'");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error(path + ": no data rows");

    Dataset data;
    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    const bool has_target = target_idx >= 0;
    const Eigen::Index d = static_cast<Eigen::Index>(header.size()) - (has_target ? 1 : 0);
    data.X = Matrix(n, d);
    data.Y = Vector(has_target ? n : 0);
    data.target_name = target_column;
    for (std::size_t j = 0; j < header.size(); ++j)
        if (static_cast<Eigen::Index>(j) != target_idx) data.column_names.push_back(header[j]);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index col = 0;
        for (std::size_t j = 0; j < header.size(); ++j) {
            if (static_cast<Eigen::Index>(j) == target_idx)
                data.Y(i) = rows[i][j];
            else
                data.X(i, col++) = rows[i][j];
        }
    }
    return data;
}

void save_csv(const Dataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open CSV file for writing: " + path);
    const Eigen::Index d = data.X.cols();
    std::vector<std::string> names = data.column_names;
    if (names.empty())
        for (Eigen::Index j = 0; j < d; ++j) names.push_back("x" + std::to_string(j));
    for (Eigen::Index j = 0; j < d; ++j) out << names[j] << ',';
    out << (data.target_name.empty() ? "y" : data.target_name) << '\n';
    char buf[40];
    for (Eigen::Index i = 0; i < data.X.rows(); ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", data.X(i, j));
            out << buf << ',';
        }
        std::snprintf(buf, sizeof buf, "%.17g", data.Y(i));
        out << buf << '\n';
    }
}

Standardization standardize(Dataset& train, std::vector<Dataset*> others) {
    if (train.X.rows() < 2) throw std::invalid_argument("standardize: need >= 2 training rows");
    const Eigen::Index d = train.X.cols();
    const double n = static_cast<double>(train.X.rows());

    Standardization st;
    st.means = train.X.colwise().mean();
    st.stds = Vector(d);
    st.constant_columns.assign(d, false);
    for (Eigen::Index j = 0; j < d; ++j) {
        const double var = (train.X.col(j).array() - st.means(j)).square().sum() / n;
        const double sd = std::sqrt(var);
        if (sd > 0.0) {
            st.stds(j) = sd;
        } else {
            st.stds(j) = 1.0;
            st.constant_columns[j] = true;
        }
    }

    const auto apply = [&](Dataset& data) {
        if (data.X.cols() != d) throw std::invalid_argument("standardize: column mismatch");
        data.X.rowwise() -= st.means.transpose();
        data.X.array().rowwise() /= st.stds.transpose().array();
    };
    apply(train);
    for (Dataset* other : others) apply(*other);
    return st;
}

}  // namespace bkernn::datagen
