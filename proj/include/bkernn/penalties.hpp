#pragma once

#include <Eigen/Dense>
#include <string>

namespace bkernn::penalties {

using Matrix = Eigen::MatrixXd;

enum class PenaltyTag { basic, variable, feature, concave_variable, concave_feature };

struct PenaltyKind {
    PenaltyTag tag = PenaltyTag::basic;
    double s = 1.0;  // concavity parameter, used by the concave tags only

    bool concave() const {
        return tag == PenaltyTag::concave_variable || tag == PenaltyTag::concave_feature;
    }
    bool spectral() const {
        return tag == PenaltyTag::feature || tag == PenaltyTag::concave_feature;
    }
};

std::string to_string(PenaltyTag tag);
PenaltyTag penalty_from_string(const std::string& name);

// Penalty value Omega(W):
//   basic:            (1/2m) sum_j ||w_j||
//   variable:         (1/2 sqrt(m)) sum_a ||W^(a)||
//   feature:          (1/2 sqrt(m)) sum_a S_a          (singular values of W)
//   concave variable: (1/2s) sum_a log(1 + (s/sqrt(m)) ||W^(a)||)
//   concave feature:  (1/2s) sum_a log(1 + (s/sqrt(m)) S_a)
double penalty_value(const PenaltyKind& kind, const Matrix& W);

// prox_{t Omega}(W): minimizer of (1/2)||W - U||_F^2 + t Omega(U).
// Columns, rows, or singular values are shrunk per the closed forms; the
// concave kinds solve a per-block scalar quadratic and compare the
// candidate stationary points against zero.
Matrix prox(const PenaltyKind& kind, const Matrix& W, double t);

// Scalar concave shrinkage shared by the concave kinds: minimizes
//   (1/2)(r - u)^2 + (t/2s) log(1 + (s/sqrt(m)) u)   over u >= 0,
// returned as the multiplier c with u = c r. Exposed for tests.
double concave_shrink_factor(double r, double t, double s, double sqrt_m);

}  // namespace bkernn::penalties
