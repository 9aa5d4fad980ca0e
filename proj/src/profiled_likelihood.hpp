#pragma once

#include "lmmbic/candidate.hpp"
#include "lmmbic/dataset.hpp"

#include <Eigen/Dense>

#include <vector>

namespace lmmbic::detail {

using Mat3 = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;
using Vec3 = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using Mat35 = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 5>;
using Mat5 = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 5, 5>;
using Vec5 = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 5, 1>;

/**
 * Subject data projected onto span{1, x, x^2}.
 *
 * Every column of X_i and Z_i lies in the span of B_i = [1 x x^2], so with a
 * thin QR B_i = Q_i R_i (rank r_i <= 3) the block splits exactly into
 *   - r_i coordinates Q_i'y_i with covariance sigma^2 I + (Q_i'Z_i) D (Q_i'Z_i)'
 *   - n_i - r_i orthogonal coordinates with covariance sigma^2 I and zero mean,
 * whose only sufficient statistic is their sum of squares.
 */
struct ReducedSubject {
    Eigen::Index n = 0;
    Eigen::Index rank = 0;
    Mat3 basis;           // r x 3, Q'B
    Vec3 response;        // r, Q'y
    double orth_ss = 0.0;  // |y - Q Q'y|^2
    double c = 0.0;
};

std::vector<ReducedSubject> reduce_subjects(const Dataset& data);

/**
 * Exact Gaussian marginal log-likelihood of a candidate, profiled over the
 * mean coefficients by whitened GLS. Cost per evaluation is O(N), independent
 * of the per-subject observation counts.
 *
 * Holds per-subject scratch, so one instance must not be evaluated from two
 * threads at once.
 */
class ProfiledLikelihood {
public:
    ProfiledLikelihood(const CandidateModel& candidate, const Dataset& data);

    struct Result {
        Vec5 beta;
        double loglik = 0.0;
    };

    // Throws FactorizationError if a reduced block is not numerically PD.
    Result evaluate(const Eigen::VectorXd& omega2, double sigma2);

    // sum_i X_i' V_i^{-1} (y_i - X_i beta) from the last evaluate() call.
    Eigen::VectorXd score(const Vec5& beta) const;

    Eigen::Index n() const noexcept { return n_; }

private:
    struct Block {
        ReducedSubject reduced;
        Mat35 X;  // r x p
        Mat3 Z;   // r x q
        Mat35 W;  // L^{-1} X, filled by evaluate()
        Vec3 w;   // L^{-1} y
    };

    std::vector<Block> blocks_;
    Eigen::Index p_ = 0;
    Eigen::Index q_ = 0;
    Eigen::Index n_ = 0;
};

}  // namespace lmmbic::detail
