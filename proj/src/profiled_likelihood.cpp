#include "profiled_likelihood.hpp"

#include "lmmbic/errors.hpp"

#include <cmath>
#include <numbers>

namespace lmmbic::detail {

std::vector<ReducedSubject> reduce_subjects(const Dataset& data) {
    std::vector<ReducedSubject> out;
    out.reserve(data.N());
    for (const auto& subject : data.subjects()) {
        const Eigen::Index n = subject.x.size();
        Eigen::MatrixXd B(n, 3);
        B.col(0).setOnes();
        B.col(1) = subject.x;
        B.col(2) = subject.x.array().square().matrix();

        const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(B);
        ReducedSubject r;
        r.n = n;
        r.rank = qr.rank();
        r.c = subject.c;
        const auto Qt = qr.householderQ().transpose();
        const Eigen::VectorXd qty = Qt * subject.y;
        const Eigen::MatrixXd qtb = Qt * B;
        r.basis = qtb.topRows(r.rank);
        r.response = qty.head(r.rank);
        r.orth_ss = qty.tail(n - r.rank).squaredNorm();
        out.push_back(std::move(r));
    }
    return out;
}

ProfiledLikelihood::ProfiledLikelihood(const CandidateModel& candidate, const Dataset& data)
    : p_(candidate.mean_count()), q_(candidate.random_count()), n_(static_cast<Eigen::Index>(data.n())) {
    const Eigen::MatrixXd S = random_selector(candidate);
    auto reduced = reduce_subjects(data);
    blocks_.reserve(reduced.size());
    Eigen::Index stacked_rows = 0;
    for (auto& r : reduced) {
        Block b;
        b.X = r.basis * psi_loading(candidate, r.c);
        b.Z = r.basis * S;
        stacked_rows += r.rank;
        b.reduced = std::move(r);
        blocks_.push_back(std::move(b));
    }

    // X'V^{-1}X is singular iff the stacked design is rank deficient.
    Eigen::MatrixXd stacked(stacked_rows, p_);
    Eigen::Index row = 0;
    for (const auto& b : blocks_) {
        stacked.middleRows(row, b.reduced.rank) = b.X;
        row += b.reduced.rank;
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(stacked);
    if (stacked_rows < p_ || qr.rank() < p_) {
        throw UnidentifiableError(candidate.id() + ": fixed-effect design is rank deficient on this dataset");
    }
}

ProfiledLikelihood::Result ProfiledLikelihood::evaluate(const Eigen::VectorXd& omega2, double sigma2) {
    const double log_sigma2 = std::log(sigma2);
    Mat5 A = Mat5::Zero(p_, p_);
    Vec5 rhs = Vec5::Zero(p_);
    double log_det = 0.0;
    double orth = 0.0;

    for (auto& b : blocks_) {
        const Eigen::Index r = b.reduced.rank;
        log_det += static_cast<double>(b.reduced.n - r) * log_sigma2;
        orth += b.reduced.orth_ss;
        if (r == 0) continue;

        Mat3 V = b.Z * omega2.asDiagonal() * b.Z.transpose();
        V.diagonal().array() += sigma2;
        const Eigen::LLT<Mat3> llt(V);
        if (llt.info() != Eigen::Success) throw FactorizationError("reduced covariance block is not positive definite");
        log_det += 2.0 * llt.matrixLLT().diagonal().array().log().sum();

        b.W = llt.matrixL().solve(b.X);
        b.w = llt.matrixL().solve(b.reduced.response);
        A.noalias() += b.W.transpose() * b.W;
        rhs.noalias() += b.W.transpose() * b.w;
    }

    const Eigen::LLT<Mat5> normal(A);
    if (normal.info() != Eigen::Success) throw UnidentifiableError("GLS normal equations are singular");
    Result result;
    result.beta = normal.solve(rhs);

    double quad = orth / sigma2;
    for (const auto& b : blocks_) {
        if (b.reduced.rank > 0) quad += (b.w - b.W * result.beta).squaredNorm();
    }
    static const double kLog2Pi = std::log(2.0 * std::numbers::pi);
    result.loglik = -0.5 * (static_cast<double>(n_) * kLog2Pi + log_det + quad);
    return result;
}

Eigen::VectorXd ProfiledLikelihood::score(const Vec5& beta) const {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(p_);
    for (const auto& b : blocks_) {
        if (b.reduced.rank > 0) g.noalias() += b.W.transpose() * (b.w - b.W * beta);
    }
    return g;
}

}  // namespace lmmbic::detail
