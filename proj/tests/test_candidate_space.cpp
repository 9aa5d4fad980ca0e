#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lmmbic/candidate.hpp"

#include <cmath>
#include <set>

using namespace lmmbic;

namespace {
SubjectBlock subject(std::vector<double> x, double c) {
    SubjectBlock b;
    b.id = "s";
    b.x = Eigen::Map<Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
    b.y = Eigen::VectorXd::Zero(b.x.size());
    b.c = c;
    return b;
}

double sample_variance(const std::vector<double>& v) {
    double mean = 0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(v.size() - 1);
}
}  // namespace

TEST_CASE("enumerate_candidates is O-major") {
    const auto all = enumerate_candidates();
    REQUIRE(all.size() == 16);
    CHECK(all.front().id() == "O1M1");
    CHECK(all.back().id() == "O4M4");
    std::set<std::string> ids;
    for (std::size_t k = 0; k < all.size(); ++k) {
        CHECK(all[k].index() == static_cast<int>(k));
        ids.insert(all[k].id());
    }
    CHECK(ids.size() == 16);
    CHECK(all[4].id() == "O2M1");
}

TEST_CASE("candidate flags") {
    CHECK(!CandidateModel(1, 1).alpha1_free());
    CHECK(CandidateModel(1, 2).alpha1_free());
    CHECK(!CandidateModel(1, 2).alpha2_free());
    CHECK(CandidateModel(1, 3).alpha2_free());
    CHECK(CandidateModel(1, 4).alpha1_free());
    CHECK(CandidateModel(1, 4).alpha2_free());
    CHECK(CandidateModel(2, 1).omega1_free());
    CHECK(!CandidateModel(2, 1).omega2_free());
    CHECK(CandidateModel(3, 1).omega2_free());
    CHECK(!CandidateModel(3, 1).omega1_free());
    CHECK(CandidateModel(4, 1).omega1_free());
    CHECK(CandidateModel(4, 1).omega2_free());
    CHECK_THROWS(CandidateModel(0, 1));
    CHECK_THROWS(CandidateModel(1, 5));
}

TEST_CASE("candidate ids parse and print") {
    for (const auto& c : enumerate_candidates()) CHECK(CandidateModel::parse(c.id()) == c);
    for (const char* bad : {"O5M1", "O0M1", "o1m1", "O1M", "O1M10", "M1O1", ""}) {
        CHECK_FALSE(CandidateModel::parse(bad).has_value());
    }
}

TEST_CASE("build_design examples") {
    const auto b = subject({0.0, 2.0, 3.0}, 0.5);
    SUBCASE("O1M1") {
        const auto d = build_design(CandidateModel(1, 1), b);
        Eigen::MatrixXd X(3, 3);
        X << 1, 0, 0, 1, 2, 4, 1, 3, 9;
        CHECK(d.X == X);
        CHECK(d.Z == Eigen::MatrixXd::Ones(3, 1));
    }
    SUBCASE("O2M1") {
        const auto d = build_design(CandidateModel(2, 1), b);
        CHECK(d.X.cols() == 3);
        Eigen::MatrixXd Z(3, 2);
        Z << 1, 0, 1, 2, 1, 3;
        CHECK(d.Z == Z);
    }
    SUBCASE("O4M4") {
        const auto d = build_design(CandidateModel(4, 4), b);
        Eigen::MatrixXd X(3, 5);
        X << 1, 0, 0, 0, 0, 1, 2, 4, 1, 2, 1, 3, 9, 1.5, 4.5;
        Eigen::MatrixXd Z(3, 3);
        Z << 1, 0, 0, 1, 2, 4, 1, 3, 9;
        CHECK(d.X == X);
        CHECK(d.Z == Z);
    }
    SUBCASE("O3M2 orders alpha and omega columns") {
        const auto d = build_design(CandidateModel(3, 2), b);
        CHECK(d.X.col(3) == 0.5 * b.x);
        CHECK(d.Z.col(1) == b.x.array().square().matrix());
    }
}

TEST_CASE("psi_loading is the C_i matrix restricted to free columns") {
    const double c = -1.25;
    Eigen::MatrixXd C(3, 5);
    C << 1, 0, 0, 0, 0, 0, 1, 0, c, 0, 0, 0, 1, 0, c;
    CHECK(psi_loading(CandidateModel(1, 4), c) == C);
    CHECK(psi_loading(CandidateModel(1, 1), c) == C.leftCols(3));
    Eigen::MatrixXd m3(3, 4);
    m3 << C.leftCols(3), C.col(4);
    CHECK(psi_loading(CandidateModel(1, 3), c) == m3);
}

TEST_CASE("column counts match the penalty table for every candidate") {
    // BIC_N penalty coefficients, rows O1..O4, columns M1..M4.
    const int table3_p[4][4] = {{5, 6, 6, 7}, {6, 7, 7, 8}, {6, 7, 7, 8}, {7, 8, 8, 9}};
    const auto b = subject({0.0, 1.0, 4.0, 6.0}, 0.3);
    for (const auto& cand : enumerate_candidates()) {
        CAPTURE(cand.id());
        const auto d = build_design(cand, b);
        const int n_alpha = cand.alpha1_free() + cand.alpha2_free();
        const int n_omega = cand.omega1_free() + cand.omega2_free();
        CHECK(d.X.cols() == 3 + n_alpha);
        CHECK(d.Z.cols() == 1 + n_omega);
        CHECK(cand.parameter_count() == d.X.cols() + d.Z.cols() + 1);
        CHECK(cand.parameter_count() == table3_p[cand.o() - 1][cand.m() - 1]);
        CHECK(parameter_labels(cand).size() == static_cast<std::size_t>(cand.parameter_count()));
    }
}

TEST_CASE("every design's columns are contained in the O4M4 design") {
    const auto b = subject({0.0, 1.5, 2.0, 7.0, 10.0}, 0.8);
    const auto full = build_design(CandidateModel(4, 4), b);
    auto contained = [](const Eigen::MatrixXd& cols, const Eigen::MatrixXd& in) {
        for (Eigen::Index j = 0; j < cols.cols(); ++j) {
            bool found = false;
            for (Eigen::Index k = 0; k < in.cols(); ++k) found = found || cols.col(j) == in.col(k);
            if (!found) return false;
        }
        return true;
    };
    for (const auto& cand : enumerate_candidates()) {
        const auto d = build_design(cand, b);
        CHECK(contained(d.X, full.X));
        CHECK(contained(d.Z, full.Z));
    }
}

TEST_CASE("generate_dataset shape, grid and determinism") {
    TrueParameters truth;
    truth.mu = {0.1, 0.2, -0.05};
    truth.omega2 = {0.5, 0.0, 0.0};
    const SimulationDesign design{'a', 20, 5};
    const Dataset a = generate_dataset(design, truth, 99);
    const Dataset b = generate_dataset(design, truth, 99);
    const Dataset other = generate_dataset(design, truth, 100);
    CHECK(a.N() == 20);
    CHECK(a.n() == 100);
    for (std::size_t i = 0; i < a.N(); ++i) {
        const auto& s = a.subject(i);
        REQUIRE(s.size() == 5);
        CHECK(s.x[0] == 0.0);
        CHECK(s.x[4] == 10.0);
        CHECK(s.x[2] == 5.0);
        CHECK(s.y == b.subject(i).y);
        CHECK(s.c == b.subject(i).c);
    }
    CHECK(a.subject(0).y != other.subject(0).y);
    CHECK_THROWS(generate_dataset(SimulationDesign{'x', 3, 1}, truth, 1));
}

TEST_CASE("generate_dataset draws are local to subject and observation") {
    // A larger design reuses the same streams for the subjects it shares.
    TrueParameters truth;
    truth.omega2 = {0.5, 0.1, 0.0};
    const Dataset small = generate_dataset(SimulationDesign{'a', 3, 5}, truth, 5);
    const Dataset large = generate_dataset(SimulationDesign{'c', 10, 5}, truth, 5);
    for (std::size_t i = 0; i < 3; ++i) CHECK(small.subject(i).y == large.subject(i).y);
}

TEST_CASE("noiseless generation lies on the population quadratic") {
    TrueParameters truth;
    truth.mu = {0.3, -1.2, 0.07};
    truth.omega2 = {0.0, 0.0, 0.0};
    truth.sigma2 = 1e-20;
    const Dataset data = generate_dataset(SimulationDesign{'a', 5, 11}, truth, 3);
    for (const auto& s : data.subjects()) {
        for (Eigen::Index j = 0; j < s.x.size(); ++j) {
            const double x = s.x[j];
            CHECK(std::abs(s.y[j] - (0.3 - 1.2 * x + 0.07 * x * x)) < 1e-8);
        }
    }
}

TEST_CASE("generated random intercepts have variance omega0^2") {
    TrueParameters truth;
    truth.mu = {0.01, 0.005, 0.0025};
    truth.omega2 = {0.6, 0.0, 0.0};
    truth.sigma2 = 1e-20;
    const Dataset data = generate_dataset(SimulationDesign{'x', 2000, 2}, truth, 2024);
    std::vector<double> deviations, covariates;
    for (const auto& s : data.subjects()) {
        deviations.push_back(s.y[0] - truth.mu[0]);
        covariates.push_back(s.c);
    }
    CHECK(sample_variance(deviations) == doctest::Approx(0.6).epsilon(0.10));
    CHECK(sample_variance(covariates) == doctest::Approx(1.0).epsilon(0.10));
}

TEST_CASE("generated residuals have variance sigma^2") {
    TrueParameters truth;
    truth.mu = {1.0, 0.0, 0.0};
    truth.sigma2 = 2.5;
    const Dataset data = generate_dataset(SimulationDesign{'x', 200, 100}, truth, 17);
    std::vector<double> residuals;
    for (const auto& s : data.subjects()) {
        for (Eigen::Index j = 0; j < s.y.size(); ++j) residuals.push_back(s.y[j] - 1.0);
    }
    CHECK(sample_variance(residuals) == doctest::Approx(2.5).epsilon(0.05));
}

TEST_CASE("TrueParameters zero pattern") {
    TrueParameters t;
    t.omega2 = {0.5, 0.3, 0.0};
    t.alpha = {0.2, 0.0};
    CHECK(t.consistent_with(CandidateModel(2, 2)));
    CHECK(t.consistent_with(CandidateModel(4, 4)));
    CHECK_FALSE(t.consistent_with(CandidateModel(1, 2)));
    CHECK_FALSE(t.consistent_with(CandidateModel(2, 1)));
}
