#include "bkernn/ridge.hpp"

#include <cmath>
#include <stdexcept>

namespace bkernn::ridge {

RidgeSolution solve_inner_centered(const kernels::CenteredSystem& cs, const Matrix& K,
                                   const Vector& Y, double lambda) {
    if (lambda <= 0.0) throw std::invalid_argument("solve_inner: lambda must be positive");
    if (!K.allFinite() || !Y.allFinite())
        throw std::invalid_argument("solve_inner: non-finite input");
    const Eigen::Index n = K.rows();

    Matrix A = cs.Ktilde;
    A.diagonal().array() += static_cast<double>(n) * lambda;
    Eigen::LLT<Matrix> llt(A);
    if (llt.info() != Eigen::Success) {
        // Ktilde is PSD in exact arithmetic; retry once with jitter.
        A.diagonal().array() += 1e-10 * cs.Ktilde.trace() / static_cast<double>(n);
        llt.compute(A);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("solve_inner: Cholesky failed, kernel matrix not PSD");
    }

    RidgeSolution sol;
    sol.alpha = llt.solve(cs.Ytilde);
    sol.c = cs.ymean - (K * sol.alpha).mean();
    sol.g_value = 0.5 * lambda * cs.Ytilde.dot(sol.alpha);
    return sol;
}

RidgeSolution solve_inner(const Matrix& K, const Vector& Y, double lambda) {
    return solve_inner_centered(kernels::center(K, Y), K, Y, lambda);
}

double objective_full(const Matrix& K, const Vector& Y, const RidgeSolution& sol, double lambda) {
    const Eigen::Index n = Y.size();
    const Vector Ka = K * sol.alpha;
    const Vector resid = Y - Ka - Vector::Constant(n, sol.c);
    return resid.squaredNorm() / (2.0 * static_cast<double>(n)) +
           0.5 * lambda * sol.alpha.dot(Ka);
}

}  // namespace bkernn::ridge
