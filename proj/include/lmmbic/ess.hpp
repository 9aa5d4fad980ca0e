#pragma once

#include "lmmbic/estimation.hpp"

#include <Eigen/Dense>

#include <vector>

namespace lmmbic {

// Sum of the entries of R^{-1}, computed as 1'w with R w = 1 (Cholesky
// solve, R^{-1} is never formed). Throws FactorizationError if R is not PD.
double magnitude(const Eigen::MatrixXd& R);

struct CorrelationStructure {
    // Indexed like FittedModel::V_blocks: subjects sharing a covariate grid
    // share a block.
    std::vector<Eigen::MatrixXd> blocks;
    std::vector<Eigen::VectorXd> w_blocks;
    std::vector<std::size_t> block_of_subject;
    double n_e = 0.0;
};

CorrelationStructure correlation_structure(const BlockDiagonal& covariance);

// n_e = sum_i |R_i| with R_i the correlation of V_i at the fit's estimates.
// Subjects are independent, so the n x n system is never formed.
double effective_sample_size(const FittedModel& fit);
double effective_sample_size(const BlockDiagonal& covariance);

}  // namespace lmmbic
