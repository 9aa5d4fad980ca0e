#include "lmmbic/ess.hpp"

#include "lmmbic/errors.hpp"

namespace lmmbic {

namespace {

Eigen::VectorXd solve_ones(const Eigen::MatrixXd& R) {
    if (R.rows() != R.cols()) throw DimensionError("correlation matrix must be square");
    const Eigen::LLT<Eigen::MatrixXd> llt(R);
    if (llt.info() != Eigen::Success) throw FactorizationError("correlation matrix is not positive definite");
    return llt.solve(Eigen::VectorXd::Ones(R.rows()));
}

}  // namespace

double magnitude(const Eigen::MatrixXd& R) {
    return solve_ones(R).sum();
}

CorrelationStructure correlation_structure(const BlockDiagonal& covariance) {
    CorrelationStructure out;
    out.blocks.reserve(covariance.unique_blocks().size());
    for (const auto& V : covariance.unique_blocks()) {
        out.blocks.push_back(correlation_from_covariance(V));
        out.w_blocks.push_back(solve_ones(out.blocks.back()));
    }
    for (std::size_t i = 0; i < covariance.subject_count(); ++i) {
        out.block_of_subject.push_back(covariance.unique_index(i));
        out.n_e += out.w_blocks[out.block_of_subject.back()].sum();
    }
    return out;
}

double effective_sample_size(const BlockDiagonal& covariance) {
    std::vector<double> per_block;
    per_block.reserve(covariance.unique_blocks().size());
    for (const auto& V : covariance.unique_blocks()) per_block.push_back(magnitude(correlation_from_covariance(V)));
    double n_e = 0.0;
    for (std::size_t i = 0; i < covariance.subject_count(); ++i) n_e += per_block[covariance.unique_index(i)];
    return n_e;
}

double effective_sample_size(const FittedModel& fit) {
    return effective_sample_size(fit.V_blocks);
}

}  // namespace lmmbic
