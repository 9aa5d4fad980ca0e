#include "lmmbic/candidate.hpp"

#include "lmmbic/random.hpp"

#include <cmath>

namespace lmmbic {

std::string CandidateModel::id() const {
    return "O" + std::to_string(o_) + "M" + std::to_string(m_);
}

std::optional<CandidateModel> CandidateModel::parse(std::string_view id) {
    if (id.size() != 4 || id[0] != 'O' || id[2] != 'M') return std::nullopt;
    const int o = id[1] - '0';
    const int m = id[3] - '0';
    if (o < 1 || o > 4 || m < 1 || m > 4) return std::nullopt;
    return CandidateModel(o, m);
}

std::vector<CandidateModel> enumerate_candidates() {
    std::vector<CandidateModel> out;
    out.reserve(16);
    for (int o = 1; o <= 4; ++o) {
        for (int m = 1; m <= 4; ++m) out.emplace_back(o, m);
    }
    return out;
}

std::vector<std::string> mean_labels(const CandidateModel& candidate) {
    std::vector<std::string> labels{"mu0", "mu1", "mu2"};
    if (candidate.alpha1_free()) labels.emplace_back("alpha1");
    if (candidate.alpha2_free()) labels.emplace_back("alpha2");
    return labels;
}

std::vector<std::string> variance_labels(const CandidateModel& candidate) {
    std::vector<std::string> labels{"omega0_sq"};
    if (candidate.omega1_free()) labels.emplace_back("omega1_sq");
    if (candidate.omega2_free()) labels.emplace_back("omega2_sq");
    return labels;
}

std::vector<std::string> parameter_labels(const CandidateModel& candidate) {
    auto labels = mean_labels(candidate);
    for (auto& v : variance_labels(candidate)) labels.push_back(std::move(v));
    labels.emplace_back("sigma_sq");
    return labels;
}

Eigen::MatrixXd psi_loading(const CandidateModel& candidate, double c) {
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(3, candidate.mean_count());
    K(0, 0) = 1.0;
    K(1, 1) = 1.0;
    K(2, 2) = 1.0;
    Eigen::Index col = 3;
    if (candidate.alpha1_free()) K(1, col++) = c;
    if (candidate.alpha2_free()) K(2, col++) = c;
    return K;
}

Eigen::MatrixXd random_selector(const CandidateModel& candidate) {
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(3, candidate.random_count());
    const auto components = candidate.random_components();
    Eigen::Index col = 0;
    for (Eigen::Index k = 0; k < 3; ++k) {
        if (components[static_cast<std::size_t>(k)]) S(k, col++) = 1.0;
    }
    return S;
}

DesignBlocks build_design(const CandidateModel& candidate, const SubjectBlock& block) {
    const Eigen::Index n = block.x.size();
    Eigen::MatrixXd basis(n, 3);
    basis.col(0).setOnes();
    basis.col(1) = block.x;
    basis.col(2) = block.x.array().square().matrix();
    return {basis * psi_loading(candidate, block.c), basis * random_selector(candidate)};
}

bool TrueParameters::consistent_with(const CandidateModel& candidate) const noexcept {
    if (!candidate.alpha1_free() && alpha[0] != 0.0) return false;
    if (!candidate.alpha2_free() && alpha[1] != 0.0) return false;
    if (!candidate.omega1_free() && omega2[1] != 0.0) return false;
    if (!candidate.omega2_free() && omega2[2] != 0.0) return false;
    return sigma2 > 0.0 && omega2[0] >= 0.0 && omega2[1] >= 0.0 && omega2[2] >= 0.0;
}

Dataset generate_dataset(const SimulationDesign& design, const TrueParameters& truth, std::uint64_t seed) {
    if (design.N < 1 || design.n_sub < 2) throw std::invalid_argument("design needs N >= 1 and n_sub >= 2");

    const Eigen::Index n_sub = design.n_sub;
    Eigen::VectorXd grid(n_sub);
    for (Eigen::Index j = 0; j < n_sub; ++j) grid[j] = 10.0 * static_cast<double>(j) / static_cast<double>(n_sub - 1);

    const double sigma = std::sqrt(truth.sigma2);
    std::vector<SubjectBlock> subjects;
    subjects.reserve(static_cast<std::size_t>(design.N));
    for (int i = 0; i < design.N; ++i) {
        const auto subject_index = static_cast<std::uint64_t>(i);
        RandomStream subject_rng(seed, {static_cast<std::uint64_t>(StreamPurpose::kSubject), subject_index, 0});
        SubjectBlock block;
        block.id = "s" + std::to_string(i + 1);
        block.c = subject_rng.normal();
        std::array<double, 3> psi{};
        for (std::size_t k = 0; k < 3; ++k) psi[k] = truth.mu[k] + std::sqrt(truth.omega2[k]) * subject_rng.normal();
        psi[1] += truth.alpha[0] * block.c;
        psi[2] += truth.alpha[1] * block.c;

        block.x = grid;
        block.y.resize(n_sub);
        for (Eigen::Index j = 0; j < n_sub; ++j) {
            RandomStream obs_rng(seed, {static_cast<std::uint64_t>(StreamPurpose::kObservation), subject_index,
                                        static_cast<std::uint64_t>(j)});
            const double x = grid[j];
            block.y[j] = psi[0] + psi[1] * x + psi[2] * x * x + sigma * obs_rng.normal();
        }
        subjects.push_back(std::move(block));
    }
    return Dataset(std::move(subjects));
}

}  // namespace lmmbic
