#pragma once

#include "lmmbic/candidate.hpp"
#include "lmmbic/dataset.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace lmmbic {

// Free parameters of a candidate: mean coefficients in mean_labels() order,
// random-effect variances in variance_labels() order, residual variance.
struct ParameterVector {
    Eigen::VectorXd beta;
    Eigen::VectorXd omega2;
    double sigma2 = 1.0;

    // Throws DimensionError / std::invalid_argument on a shape or sign violation.
    void validate_for(const CandidateModel& candidate) const;
};

// Restriction of generating parameters to a candidate's free parameters.
ParameterVector parameters_from_truth(const TrueParameters& truth, const CandidateModel& candidate);

// V_i = Z_i diag(omega2) Z_i' + sigma2 I.
Eigen::MatrixXd assemble_marginal_covariance(const Eigen::MatrixXd& Z, const Eigen::VectorXd& omega2,
                                             double sigma2);

// Gaussian log-density of one block, via Cholesky of V.
double block_log_likelihood(const Eigen::VectorXd& residual, const Eigen::MatrixXd& V);

// Exact marginal ML log-likelihood, natural log, one Cholesky per subject.
double log_likelihood(const ParameterVector& params, const CandidateModel& candidate, const Dataset& data);

// R = D^{-1/2} V D^{-1/2}, D = diag(V).
Eigen::MatrixXd correlation_from_covariance(const Eigen::MatrixXd& V);

/**
 * Per-subject covariance blocks of a block-diagonal matrix. Subjects that
 * share a covariate grid share one stored block.
 */
class BlockDiagonal {
public:
    BlockDiagonal() = default;
    BlockDiagonal(std::vector<Eigen::MatrixXd> unique_blocks, std::vector<std::size_t> block_of_subject);

    std::size_t subject_count() const noexcept { return block_of_subject_.size(); }
    const Eigen::MatrixXd& block(std::size_t subject) const { return unique_blocks_.at(block_of_subject_.at(subject)); }

    const std::vector<Eigen::MatrixXd>& unique_blocks() const noexcept { return unique_blocks_; }
    std::size_t unique_index(std::size_t subject) const { return block_of_subject_.at(subject); }

private:
    std::vector<Eigen::MatrixXd> unique_blocks_;
    std::vector<std::size_t> block_of_subject_;
};

// Marginal covariance blocks of every subject at the given variances.
BlockDiagonal marginal_covariances(const CandidateModel& candidate, const Dataset& data,
                                   const Eigen::VectorXd& omega2, double sigma2);

}  // namespace lmmbic
