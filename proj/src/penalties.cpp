#include "bkernn/penalties.hpp"

#include <cmath>
#include <stdexcept>

namespace bkernn::penalties {

std::string to_string(PenaltyTag tag) {
    switch (tag) {
        case PenaltyTag::basic: return "basic";
        case PenaltyTag::variable: return "variable";
        case PenaltyTag::feature: return "feature";
        case PenaltyTag::concave_variable: return "concave-variable";
        case PenaltyTag::concave_feature: return "concave-feature";
    }
    return "?";
}

PenaltyTag penalty_from_string(const std::string& name) {
    if (name == "basic") return PenaltyTag::basic;
    if (name == "variable") return PenaltyTag::variable;
    if (name == "feature") return PenaltyTag::feature;
    if (name == "concave-variable" || name == "concave_variable")
        return PenaltyTag::concave_variable;
    if (name == "concave-feature" || name == "concave_feature")
        return PenaltyTag::concave_feature;
    throw std::invalid_argument("unknown penalty: " + name);
}

namespace {

Eigen::VectorXd singular_values(const Matrix& W) {
    return W.jacobiSvd().singularValues();
}

}  // namespace

double penalty_value(const PenaltyKind& kind, const Matrix& W) {
    const double m = static_cast<double>(W.cols());
    const double sqm = std::sqrt(m);
    switch (kind.tag) {
        case PenaltyTag::basic:
            return W.colwise().norm().sum() / (2.0 * m);
        case PenaltyTag::variable:
            return W.rowwise().norm().sum() / (2.0 * sqm);
        case PenaltyTag::feature:
            return singular_values(W).sum() / (2.0 * sqm);
        case PenaltyTag::concave_variable: {
            double total = 0.0;
            for (Eigen::Index a = 0; a < W.rows(); ++a)
                total += std::log1p(kind.s / sqm * W.row(a).norm());
            return total / (2.0 * kind.s);
        }
        case PenaltyTag::concave_feature: {
            const Eigen::VectorXd sv = singular_values(W);
            double total = 0.0;
            for (Eigen::Index a = 0; a < sv.size(); ++a)
                total += std::log1p(kind.s / sqm * sv(a));
            return total / (2.0 * kind.s);
        }
    }
    return 0.0;
}

double concave_shrink_factor(double r, double t, double s, double sqrt_m) {
    if (r <= 0.0) return 0.0;

    // Scalar objective for u = c r, c >= 0.
    const auto objective = [&](double c) {
        const double diff = (1.0 - c) * r;
        return 0.5 * diff * diff + t / (2.0 * s) * std::log1p(s / sqrt_m * c * r);
    };

    // Stationarity of the scalar problem reduces to
    //   A c^2 + B c + C = 0,
    // with A = s r / sqrt(m), B = 1 - A, C = t / (2 sqrt(m) r) - 1.
    const double A = s * r / sqrt_m;
    const double B = 1.0 - A;
    const double C = t / (2.0 * sqrt_m * r) - 1.0;

    double best_c = 0.0;
    double best_obj = objective(0.0);
    const auto consider = [&](double c) {
        if (!(c > 0.0) || !std::isfinite(c)) return;
        const double obj = objective(c);
        if (obj < best_obj) {  // ties broken toward 0
            best_obj = obj;
            best_c = c;
        }
    };

    if (A < 1e-300) {
        // Degenerate (s -> 0) case: linear equation, plain soft threshold.
        if (B != 0.0) consider(-C / B);
    } else {
        const double delta = B * B - 4.0 * A * C;
        if (delta > 0.0) {
            // Citardauq form avoids cancellation when A is tiny.
            const double sq = std::sqrt(delta);
            const double q = -0.5 * (B + std::copysign(sq, B == 0.0 ? 1.0 : B));
            consider(q / A);
            if (q != 0.0) consider(C / q);
        }
        // delta <= 0: no stationary point, keep zero.
    }
    return best_c;
}

Matrix prox(const PenaltyKind& kind, const Matrix& W, double t) {
    if (t <= 0.0) throw std::invalid_argument("prox: step must be positive");
    const double m = static_cast<double>(W.cols());
    const double sqm = std::sqrt(m);

    switch (kind.tag) {
        case PenaltyTag::basic: {
            Matrix U = W;
            for (Eigen::Index j = 0; j < W.cols(); ++j) {
                const double norm = W.col(j).norm();
                const double factor = norm > 0.0 ? std::max(0.0, 1.0 - t / (2.0 * m * norm)) : 0.0;
                U.col(j) *= factor;
            }
            return U;
        }
        case PenaltyTag::variable: {
            Matrix U = W;
            for (Eigen::Index a = 0; a < W.rows(); ++a) {
                const double norm = W.row(a).norm();
                const double factor =
                    norm > 0.0 ? std::max(0.0, 1.0 - t / (2.0 * sqm * norm)) : 0.0;
                U.row(a) *= factor;
            }
            return U;
        }
        case PenaltyTag::concave_variable: {
            Matrix U = W;
            for (Eigen::Index a = 0; a < W.rows(); ++a)
                U.row(a) *= concave_shrink_factor(W.row(a).norm(), t, kind.s, sqm);
            return U;
        }
        case PenaltyTag::feature:
        case PenaltyTag::concave_feature: {
            Eigen::JacobiSVD<Matrix> svd(W, Eigen::ComputeThinU | Eigen::ComputeThinV);
            Eigen::VectorXd sv = svd.singularValues();
            const double cutoff = 1e-12 * (sv.size() > 0 ? sv(0) : 0.0);
            for (Eigen::Index a = 0; a < sv.size(); ++a) {
                if (sv(a) <= cutoff) {
                    sv(a) = 0.0;
                } else if (kind.tag == PenaltyTag::feature) {
                    sv(a) *= std::max(0.0, 1.0 - t / (2.0 * sqm * sv(a)));
                } else {
                    sv(a) *= concave_shrink_factor(sv(a), t, kind.s, sqm);
                }
            }
            return svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose();
        }
    }
    return W;
}

}  // namespace bkernn::penalties
