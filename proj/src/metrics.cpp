#include "bkernn/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace bkernn::metrics {

double r2_score(const Vector& y_true, const Vector& y_pred) {
    if (y_true.size() < 2 || y_true.size() != y_pred.size())
        throw std::invalid_argument("r2_score: need two vectors of equal size >= 2");
    const double mean = y_true.mean();
    const double ss_tot = (y_true.array() - mean).matrix().squaredNorm();
    if (ss_tot == 0.0) throw std::invalid_argument("r2_score: constant y_true");
    const double ss_res = (y_true - y_pred).squaredNorm();
    return 1.0 - ss_res / ss_tot;
}

namespace {

// Completes a d x r orthonormal block to d x k with Gram-Schmidt against
// the coordinate basis.
Matrix pad_orthonormal(const Matrix& Q, Eigen::Index k) {
    const Eigen::Index d = Q.rows();
    Matrix out(d, k);
    Eigen::Index filled = Q.cols();
    out.leftCols(filled) = Q;
    for (Eigen::Index e = 0; e < d && filled < k; ++e) {
        Eigen::VectorXd v = Eigen::VectorXd::Unit(d, e);
        v -= out.leftCols(filled) * (out.leftCols(filled).transpose() * v);
        const double norm = v.norm();
        if (norm > 1e-8) out.col(filled++) = v / norm;
    }
    if (filled < k) throw std::runtime_error("extract_features: cannot complete basis");
    return out;
}

}  // namespace

FeatureBasis extract_features(const Matrix& W, Eigen::Index k,
                              const penalties::PenaltyKind& kind) {
    const Eigen::Index d = W.rows();
    if (k < 1 || k > d) throw std::invalid_argument("extract_features: invalid k");
    FeatureBasis basis;

    if (kind.tag == penalties::PenaltyTag::variable ||
        kind.tag == penalties::PenaltyTag::concave_variable) {
        std::vector<Eigen::Index> idx(d);
        std::iota(idx.begin(), idx.end(), Eigen::Index{0});
        const Eigen::VectorXd norms = W.rowwise().norm();
        std::stable_sort(idx.begin(), idx.end(),
                         [&](Eigen::Index a, Eigen::Index b) { return norms(a) > norms(b); });
        basis.P = Matrix::Zero(d, k);
        for (Eigen::Index j = 0; j < k; ++j) basis.P(idx[j], j) = 1.0;
        return basis;
    }

    Eigen::JacobiSVD<Matrix> svd(W, Eigen::ComputeThinU);
    const Eigen::VectorXd sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? 1e-12 * sv(0) : 0.0;
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > cutoff) ++rank;
    if (rank >= k) {
        basis.P = svd.matrixU().leftCols(k);
    } else {
        basis.P = pad_orthonormal(svd.matrixU().leftCols(rank), k);
        basis.padded = true;
    }
    return basis;
}

double feature_score(const FeatureBasis& P_true, const FeatureBasis& P_hat, Eigen::Index d,
                     Eigen::Index k) {
    if (P_true.P.cols() != k || P_hat.P.cols() != k)
        throw std::invalid_argument("feature_score: bases must have k columns");
    if (k == d) return 1.0;

    const auto projection = [](const Matrix& P) {
        const Matrix gram = P.transpose() * P;
        Eigen::FullPivLU<Matrix> lu(gram);
        if (!lu.isInvertible())
            throw std::invalid_argument("feature_score: singular Gram matrix");
        return Matrix(P * lu.solve(P.transpose()));
    };
    const Matrix pi_true = projection(P_true.P);
    const Matrix pi_hat = projection(P_hat.P);
    // ||pi - pi_hat||_F^2 = 2k - 2 tr(pi pi_hat) for two rank-k projections.
    const double dist2 = 2.0 * static_cast<double>(k) -
                         2.0 * (pi_true.array() * pi_hat.array()).sum();
    const double denom = (2 * k <= d) ? 2.0 * static_cast<double>(k)
                                      : 2.0 * static_cast<double>(d - k);
    return 1.0 - dist2 / denom;
}

}  // namespace bkernn::metrics
