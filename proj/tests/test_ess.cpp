#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lmmbic/errors.hpp"
#include "lmmbic/ess.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <numeric>

using namespace lmmbic;

namespace {

Eigen::MatrixXd exchangeable(Eigen::Index n, double rho) {
    Eigen::MatrixXd R = Eigen::MatrixXd::Constant(n, n, rho);
    R.diagonal().setOnes();
    return R;
}

Eigen::MatrixXd block_diag(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

// Every subject on x = 0..4 with the same zero-mean residual pattern around a
// quadratic, so the between-subject intercept variance is exactly zero.
Dataset no_random_effect_data(int subjects) {
    const double pattern[5] = {0.4, -0.9, 0.3, 0.7, -0.5};
    std::vector<SubjectBlock> blocks;
    for (int i = 0; i < subjects; ++i) {
        SubjectBlock b;
        b.id = "s" + std::to_string(i);
        b.c = i % 2 == 0 ? -1.0 : 1.0;
        b.x.resize(5);
        b.y.resize(5);
        for (int j = 0; j < 5; ++j) {
            b.x[j] = j;
            b.y[j] = 1.0 + 0.2 * j - 0.03 * j * j + pattern[j];
        }
        blocks.push_back(std::move(b));
    }
    return Dataset(std::move(blocks));
}

}  // namespace

TEST_CASE("magnitude examples") {
    for (Eigen::Index n : {1, 2, 5, 9}) CHECK(magnitude(Eigen::MatrixXd::Identity(n, n)) == doctest::Approx(n).epsilon(1e-14));
    for (double rho : {-0.9, -0.5, 0.0, 0.3, 0.8}) {
        CHECK(magnitude(exchangeable(2, rho)) == doctest::Approx(2.0 / (1.0 + rho)).epsilon(1e-12));
    }
    CHECK(magnitude(exchangeable(2, -0.5)) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(magnitude(exchangeable(2, -0.5)) > 2.0);
    const Eigen::MatrixXd R5 = exchangeable(5, 0.5);
    CHECK(oracle::inverse_entry_sum(R5) == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
    CHECK(magnitude(R5) == doctest::Approx(oracle::inverse_entry_sum(R5)).epsilon(1e-12));
    CHECK(magnitude(R5) == doctest::Approx(1.666667).epsilon(1e-6));
}

TEST_CASE("magnitude rejects matrices that are not PD") {
    CHECK_THROWS_AS(magnitude(exchangeable(2, 1.5)), FactorizationError);
    CHECK_THROWS_AS(magnitude(exchangeable(3, -0.6)), FactorizationError);
}

TEST_CASE("magnitude matches an explicit inverse on random PD matrices") {
    RandomStream rng(41, {0, 0, 0});
    for (int rep = 0; rep < 40; ++rep) {
        for (Eigen::Index n = 1; n <= 8; ++n) {
            const Eigen::MatrixXd R = oracle::random_correlation(n, rng);
            CHECK(std::abs(magnitude(R) - oracle::inverse_entry_sum(R)) <= 1e-8);
        }
    }
}

TEST_CASE("magnitude is additive over blocks") {
    RandomStream rng(42, {0, 0, 0});
    for (int rep = 0; rep < 30; ++rep) {
        const Eigen::MatrixXd a = oracle::random_correlation(1 + rep % 5, rng);
        const Eigen::MatrixXd b = oracle::random_correlation(1 + rep % 7, rng);
        CHECK(std::abs(magnitude(block_diag(a, b)) - (magnitude(a) + magnitude(b))) <= 1e-10);
    }
}

TEST_CASE("magnitude is permutation invariant") {
    RandomStream rng(43, {0, 0, 0});
    for (int rep = 0; rep < 30; ++rep) {
        const Eigen::Index n = 2 + rep % 7;
        const Eigen::MatrixXd R = oracle::random_correlation(n, rng);
        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t i = order.size() - 1; i > 0; --i) {
            std::swap(order[i], order[static_cast<std::size_t>(rng.uniform() * static_cast<double>(i + 1))]);
        }
        Eigen::PermutationMatrix<Eigen::Dynamic> P(n);
        for (Eigen::Index i = 0; i < n; ++i) P.indices()[i] = order[static_cast<std::size_t>(i)];
        const Eigen::MatrixXd PR = P * R * P.transpose();
        CHECK(magnitude(PR) == doctest::Approx(magnitude(R)).epsilon(1e-12));
    }
}

TEST_CASE("effective sample size is invariant to scaling V") {
    RandomStream rng(44, {0, 0, 0});
    const Dataset data = oracle::random_dataset(rng, 9, 1, 7);
    const CandidateModel cand(4, 1);
    const Eigen::VectorXd omega2 = (Eigen::VectorXd(3) << 0.8, 0.05, 0.002).finished();
    const double base = effective_sample_size(marginal_covariances(cand, data, omega2, 1.3));
    for (double c : {0.25, 2.0, 8.0}) {
        CHECK(effective_sample_size(marginal_covariances(cand, data, c * omega2, c * 1.3)) == base);
    }
}

TEST_CASE("random intercept closed form") {
    for (const auto& [N, n_sub] : {std::pair{20, 5}, std::pair{100, 100}, std::pair{7, 2}}) {
        const double omega0 = 0.6, sigma2 = 1.4;
        const double rho = omega0 / (omega0 + sigma2);
        std::vector<SubjectBlock> blocks;
        for (int i = 0; i < N; ++i) {
            SubjectBlock b;
            b.id = "s" + std::to_string(i);
            b.x = Eigen::VectorXd::LinSpaced(n_sub, 0.0, 10.0);
            b.y = Eigen::VectorXd::Zero(n_sub);
            blocks.push_back(std::move(b));
        }
        const Dataset data(std::move(blocks));
        const BlockDiagonal V = marginal_covariances(CandidateModel(1, 1), data, Eigen::VectorXd::Constant(1, omega0), sigma2);
        const double expected = N * n_sub / (1.0 + (n_sub - 1) * rho);
        const double ne = effective_sample_size(V);
        CHECK(ne == doctest::Approx(expected).epsilon(1e-10));
        CHECK(magnitude(exchangeable(n_sub, rho)) * N == doctest::Approx(expected).epsilon(1e-10));
        CHECK(ne > N);
        CHECK(ne < static_cast<double>(data.n()));
    }
}

TEST_CASE("random intercept lies strictly between N and n on irregular data") {
    RandomStream rng(45, {0, 0, 0});
    const Dataset data = oracle::random_dataset(rng, 15, 2, 9);
    for (double omega0 : {1e-3, 0.2, 5.0, 300.0}) {
        const double ne = effective_sample_size(
            marginal_covariances(CandidateModel(1, 1), data, Eigen::VectorXd::Constant(1, omega0), 0.9));
        CHECK(ne > static_cast<double>(data.N()));
        CHECK(ne < static_cast<double>(data.n()));
    }
}

TEST_CASE("one observation per subject gives n_e = N = n") {
    std::vector<SubjectBlock> blocks;
    for (int i = 0; i < 12; ++i) {
        SubjectBlock b;
        b.id = "s" + std::to_string(i);
        b.x = Eigen::VectorXd::Constant(1, 0.5 * i);
        b.y = Eigen::VectorXd::Constant(1, 0.1 * i * i - 0.3 * i + (i % 3));
        b.c = (i % 4) - 1.5;
        blocks.push_back(std::move(b));
    }
    const Dataset data(std::move(blocks));
    const auto fit = fit_ml(CandidateModel(4, 4), data);
    CHECK(effective_sample_size(fit) == 12.0);
}

TEST_CASE("no random effects in the data gives n_e = n exactly") {
    const Dataset data = no_random_effect_data(30);
    const auto fit = fit_ml(CandidateModel(1, 1), data);
    CHECK(fit.theta_hat.omega2[0] == 0.0);
    CHECK(fit.boundary[0]);
    CHECK(effective_sample_size(fit) == static_cast<double>(data.n()));

    const BlockDiagonal V = marginal_covariances(CandidateModel(1, 1), data, Eigen::VectorXd::Zero(1), 2.0);
    CHECK(effective_sample_size(V) == 150.0);
}

TEST_CASE("correlation_structure exposes unit-diagonal blocks and solve vectors") {
    RandomStream rng(46, {0, 0, 0});
    const Dataset data = oracle::random_dataset(rng, 6, 1, 6);
    const BlockDiagonal V = marginal_covariances(CandidateModel(2, 1), data, (Eigen::VectorXd(2) << 0.5, 0.1).finished(), 1.0);
    const auto cs = correlation_structure(V);
    REQUIRE(cs.blocks.size() == cs.w_blocks.size());
    CHECK(cs.block_of_subject.size() == data.N());
    double total = 0.0;
    for (std::size_t i = 0; i < data.N(); ++i) {
        const auto& R = cs.blocks[cs.block_of_subject[i]];
        const auto& w = cs.w_blocks[cs.block_of_subject[i]];
        CHECK((R.diagonal().array() == 1.0).all());
        CHECK((R * w - Eigen::VectorXd::Ones(R.rows())).norm() <= 1e-12);
        total += w.sum();
    }
    CHECK(cs.n_e == doctest::Approx(total).epsilon(1e-14));
}
