#include "lmmbic/lmm_model.hpp"

#include "lmmbic/errors.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace lmmbic {

namespace {
const double kLog2Pi = std::log(2.0 * std::numbers::pi);
}

void ParameterVector::validate_for(const CandidateModel& candidate) const {
    if (beta.size() != candidate.mean_count()) {
        throw DimensionError(candidate.id() + ": expected " + std::to_string(candidate.mean_count()) +
                             " mean coefficients, got " + std::to_string(beta.size()));
    }
    if (omega2.size() != candidate.random_count()) {
        throw DimensionError(candidate.id() + ": expected " + std::to_string(candidate.random_count()) +
                             " random-effect variances, got " + std::to_string(omega2.size()));
    }
    if (!(sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be positive");
    if ((omega2.array() < 0.0).any()) throw std::invalid_argument("random-effect variances must be nonnegative");
}

ParameterVector parameters_from_truth(const TrueParameters& truth, const CandidateModel& candidate) {
    ParameterVector params;
    params.beta.resize(candidate.mean_count());
    params.beta.head(3) << truth.mu[0], truth.mu[1], truth.mu[2];
    Eigen::Index col = 3;
    if (candidate.alpha1_free()) params.beta[col++] = truth.alpha[0];
    if (candidate.alpha2_free()) params.beta[col++] = truth.alpha[1];
    params.omega2.resize(candidate.random_count());
    const auto components = candidate.random_components();
    Eigen::Index k = 0;
    for (std::size_t m = 0; m < 3; ++m) {
        if (components[m]) params.omega2[k++] = truth.omega2[m];
    }
    params.sigma2 = truth.sigma2;
    return params;
}

Eigen::MatrixXd assemble_marginal_covariance(const Eigen::MatrixXd& Z, const Eigen::VectorXd& omega2,
                                             double sigma2) {
    if (Z.cols() != omega2.size()) {
        throw DimensionError("Z has " + std::to_string(Z.cols()) + " columns but " +
                             std::to_string(omega2.size()) + " variances were given");
    }
    if (!(sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be positive");
    if ((omega2.array() < 0.0).any()) throw std::invalid_argument("random-effect variances must be nonnegative");

    Eigen::MatrixXd V = Eigen::MatrixXd::Identity(Z.rows(), Z.rows()) * sigma2;
    if (Z.cols() > 0) {
        const Eigen::MatrixXd ZD = Z * omega2.asDiagonal();
        V.noalias() += ZD * Z.transpose();
    }
    // Symmetrize away the rounding of the rank-q update.
    return (0.5 * (V + V.transpose())).eval();
}

double block_log_likelihood(const Eigen::VectorXd& residual, const Eigen::MatrixXd& V) {
    if (V.rows() != residual.size() || V.cols() != residual.size()) throw DimensionError("block size mismatch");
    const Eigen::LLT<Eigen::MatrixXd> llt(V);
    if (llt.info() != Eigen::Success) throw FactorizationError("marginal covariance is not positive definite");
    const Eigen::VectorXd whitened = llt.matrixL().solve(residual);
    const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    const auto n = static_cast<double>(residual.size());
    return -0.5 * (n * kLog2Pi + log_det + whitened.squaredNorm());
}

double log_likelihood(const ParameterVector& params, const CandidateModel& candidate, const Dataset& data) {
    params.validate_for(candidate);
    double total = 0.0;
    for (const auto& subject : data.subjects()) {
        const auto design = build_design(candidate, subject);
        const Eigen::MatrixXd V = assemble_marginal_covariance(design.Z, params.omega2, params.sigma2);
        total += block_log_likelihood(subject.y - design.X * params.beta, V);
    }
    return total;
}

Eigen::MatrixXd correlation_from_covariance(const Eigen::MatrixXd& V) {
    if (V.rows() != V.cols()) throw DimensionError("covariance matrix must be square");
    const Eigen::VectorXd d = V.diagonal();
    if ((d.array() <= 0.0).any()) throw std::invalid_argument("covariance matrix has a nonpositive diagonal entry");
    const Eigen::VectorXd inv_sd = d.array().sqrt().inverse();
    Eigen::MatrixXd R = inv_sd.asDiagonal() * V * inv_sd.asDiagonal();
    R.diagonal().setOnes();
    return R;
}

BlockDiagonal::BlockDiagonal(std::vector<Eigen::MatrixXd> unique_blocks, std::vector<std::size_t> block_of_subject)
    : unique_blocks_(std::move(unique_blocks)), block_of_subject_(std::move(block_of_subject)) {
    for (const auto index : block_of_subject_) {
        if (index >= unique_blocks_.size()) throw std::out_of_range("block index out of range");
    }
}

BlockDiagonal marginal_covariances(const CandidateModel& candidate, const Dataset& data,
                                   const Eigen::VectorXd& omega2, double sigma2) {
    // V_i depends on subject i only through its x grid.
    std::map<std::vector<double>, std::size_t> grid_index;
    std::vector<Eigen::MatrixXd> blocks;
    std::vector<std::size_t> block_of_subject;
    block_of_subject.reserve(data.N());
    for (const auto& subject : data.subjects()) {
        std::vector<double> key(subject.x.data(), subject.x.data() + subject.x.size());
        auto [it, inserted] = grid_index.try_emplace(std::move(key), blocks.size());
        if (inserted) {
            blocks.push_back(assemble_marginal_covariance(build_design(candidate, subject).Z, omega2, sigma2));
        }
        block_of_subject.push_back(it->second);
    }
    return BlockDiagonal(std::move(blocks), std::move(block_of_subject));
}

}  // namespace lmmbic
