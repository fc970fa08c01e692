#include "bkernn/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace bkernn::kernels {

std::string to_string(ScalarKernelKind kind) {
    switch (kind) {
        case ScalarKernelKind::brownian: return "brownian";
        case ScalarKernelKind::exponential: return "exponential";
        case ScalarKernelKind::gaussian: return "gaussian";
    }
    return "?";
}

ScalarKernelKind kernel_from_string(const std::string& name) {
    if (name == "brownian") return ScalarKernelKind::brownian;
    if (name == "exponential") return ScalarKernelKind::exponential;
    if (name == "gaussian") return ScalarKernelKind::gaussian;
    throw std::invalid_argument("unknown kernel: " + name);
}

double scalar_kernel(ScalarKernelKind kind, double a, double b) {
    switch (kind) {
        case ScalarKernelKind::brownian:
            return 0.5 * (std::abs(a) + std::abs(b) - std::abs(a - b));
        case ScalarKernelKind::exponential:
            return std::exp(-0.5 * std::abs(a - b));
        case ScalarKernelKind::gaussian: {
            const double d = a - b;
            return std::exp(-0.5 * d * d);
        }
    }
    return 0.0;
}

namespace {

// Kernel matrix of a projected sample, exploiting symmetry.
Matrix projected_kernel(const Vector& p, ScalarKernelKind kind) {
    const Eigen::Index n = p.size();
    Matrix K(n, n);
    switch (kind) {
        case ScalarKernelKind::brownian: {
            const Vector ap = p.cwiseAbs();
            for (Eigen::Index i = 0; i < n; ++i) {
                K(i, i) = ap(i);
                for (Eigen::Index j = i + 1; j < n; ++j) {
                    const double v = 0.5 * (ap(i) + ap(j) - std::abs(p(i) - p(j)));
                    K(i, j) = v;
                    K(j, i) = v;
                }
            }
            break;
        }
        case ScalarKernelKind::exponential:
            for (Eigen::Index i = 0; i < n; ++i) {
                K(i, i) = 1.0;
                for (Eigen::Index j = i + 1; j < n; ++j) {
                    const double v = std::exp(-0.5 * std::abs(p(i) - p(j)));
                    K(i, j) = v;
                    K(j, i) = v;
                }
            }
            break;
        case ScalarKernelKind::gaussian:
            for (Eigen::Index i = 0; i < n; ++i) {
                K(i, i) = 1.0;
                for (Eigen::Index j = i + 1; j < n; ++j) {
                    const double d = p(i) - p(j);
                    const double v = std::exp(-0.5 * d * d);
                    K(i, j) = v;
                    K(j, i) = v;
                }
            }
            break;
    }
    return K;
}

void accumulate_projected_kernel(const Vector& p, ScalarKernelKind kind, Matrix& K) {
    K += projected_kernel(p, kind);
}

}  // namespace

Matrix particle_kernel_matrix(const Matrix& X, const Vector& w, ScalarKernelKind kind) {
    if (X.cols() != w.size())
        throw std::invalid_argument("particle_kernel_matrix: X has " + std::to_string(X.cols()) +
                                    " columns but w has " + std::to_string(w.size()) + " entries");
    return projected_kernel(X * w, kind);
}

Matrix averaged_kernel_matrix(const Matrix& X, const Matrix& W, ScalarKernelKind kind) {
    if (X.cols() != W.rows())
        throw std::invalid_argument("averaged_kernel_matrix: dimension mismatch");
    if (W.cols() < 1) throw std::invalid_argument("averaged_kernel_matrix: no particles");
    const Matrix P = X * W;  // n x m projections
    Matrix K = Matrix::Zero(X.rows(), X.rows());
    for (Eigen::Index j = 0; j < W.cols(); ++j)
        accumulate_projected_kernel(P.col(j), kind, K);
    K /= static_cast<double>(W.cols());
    return K;
}

Matrix cross_kernel(const Matrix& X_train, const Matrix& X_new, const Matrix& W,
                    ScalarKernelKind kind) {
    if (X_train.cols() != W.rows() || X_new.cols() != W.rows())
        throw std::invalid_argument("cross_kernel: dimension mismatch");
    const Eigen::Index n = X_train.rows(), p = X_new.rows(), m = W.cols();
    const Matrix Pt = X_train * W;
    const Matrix Pn = X_new * W;
    Matrix K = Matrix::Zero(p, n);
    for (Eigen::Index j = 0; j < m; ++j)
        for (Eigen::Index r = 0; r < p; ++r)
            for (Eigen::Index i = 0; i < n; ++i)
                K(r, i) += scalar_kernel(kind, Pn(r, j), Pt(i, j));
    K /= static_cast<double>(m);
    return K;
}

Matrix mdb_kernel_matrix(const Matrix& X) {
    const Eigen::Index n = X.rows();
    const Vector norms = X.rowwise().norm();
    Matrix K(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        K(i, i) = norms(i);
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = 0.5 * (norms(i) + norms(j) - (X.row(i) - X.row(j)).norm());
            K(i, j) = v;
            K(j, i) = v;
        }
    }
    return K;
}

Matrix mdb_cross_kernel(const Matrix& X_train, const Matrix& X_new) {
    if (X_train.cols() != X_new.cols())
        throw std::invalid_argument("mdb_cross_kernel: dimension mismatch");
    const Eigen::Index n = X_train.rows(), p = X_new.rows();
    const Vector nt = X_train.rowwise().norm();
    const Vector nn = X_new.rowwise().norm();
    Matrix K(p, n);
    for (Eigen::Index r = 0; r < p; ++r)
        for (Eigen::Index i = 0; i < n; ++i)
            K(r, i) = 0.5 * (nn(r) + nt(i) - (X_new.row(r) - X_train.row(i)).norm());
    return K;
}

CenteredSystem center(const Matrix& K, const Vector& Y) {
    const Eigen::Index n = K.rows();
    CenteredSystem out;
    const Vector rowmean = K.rowwise().mean();
    const double grandmean = rowmean.mean();
    out.Ktilde = K;
    out.Ktilde.colwise() -= rowmean;
    out.Ktilde.rowwise() -= rowmean.transpose();
    out.Ktilde.array() += grandmean;
    out.ymean = Y.size() > 0 ? Y.mean() : 0.0;
    out.Ytilde = Y.array() - out.ymean;
    (void)n;
    return out;
}

}  // namespace bkernn::kernels
