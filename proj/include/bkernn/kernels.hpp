#pragma once

#include <Eigen/Dense>
#include <string>

namespace bkernn::kernels {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Scalar kernels on projected data. The Brownian kernel is positively
// 1-homogeneous; the other two are the smooth alternatives used for
// comparison runs.
enum class ScalarKernelKind { brownian, exponential, gaussian };

std::string to_string(ScalarKernelKind kind);
ScalarKernelKind kernel_from_string(const std::string& name);

// brownian:    (|a| + |b| - |a - b|) / 2  (= min(|a|,|b|) when ab > 0, else 0)
// exponential: exp(-|a - b| / 2)
// gaussian:    exp(-|a - b|^2 / 2)
double scalar_kernel(ScalarKernelKind kind, double a, double b);

// n x n kernel matrix of the projected sample (w^T x_1, ..., w^T x_n).
Matrix particle_kernel_matrix(const Matrix& X, const Vector& w, ScalarKernelKind kind);

// Mean of the per-particle kernel matrices over the columns of W.
Matrix averaged_kernel_matrix(const Matrix& X, const Matrix& W, ScalarKernelKind kind);

// p x n block of kernel evaluations between new points and training points,
// averaged over particles. Used by the representer-form predictor.
Matrix cross_kernel(const Matrix& X_train, const Matrix& X_new, const Matrix& W,
                    ScalarKernelKind kind);

// Multi-dimensional Brownian kernel matrix: (||x|| + ||x'|| - ||x - x'||)/2.
Matrix mdb_kernel_matrix(const Matrix& X);
Matrix mdb_cross_kernel(const Matrix& X_train, const Matrix& X_new);

struct CenteredSystem {
    Matrix Ktilde;   // Pi K Pi
    Vector Ytilde;   // Y - mean(Y)
    double ymean = 0.0;
};

// Double centring: Ktilde = Pi K Pi with Pi = I - 11^T/n.
CenteredSystem center(const Matrix& K, const Vector& Y);

}  // namespace bkernn::kernels
