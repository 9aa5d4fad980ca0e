#pragma once

#include "lmmbic/dataset.hpp"
#include "lmmbic/design.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lmmbic {

/**
 * One of the 16 (M, O) structures of the quadratic growth model
 *
 *   y_ij = psi_i0 + psi_i1 x_ij + psi_i2 x_ij^2 + eps_ij,
 *   psi_i = C_i beta + eta_i,  beta = (mu0, mu1, mu2, alpha1, alpha2),
 *   eta_i ~ N(0, diag(omega0^2, omega1^2, omega2^2)).
 *
 * M (1..4) says which of alpha1, alpha2 are free; O (1..4) which of
 * omega1^2, omega2^2 are free. omega0^2, mu0..mu2 and sigma^2 are always free.
 */
class CandidateModel {
public:
    constexpr CandidateModel(int o, int m) : o_(o), m_(m) { validate(); }

    constexpr int o() const noexcept { return o_; }
    constexpr int m() const noexcept { return m_; }

    constexpr bool alpha1_free() const noexcept { return m_ == 2 || m_ == 4; }
    constexpr bool alpha2_free() const noexcept { return m_ == 3 || m_ == 4; }
    constexpr bool omega1_free() const noexcept { return o_ == 2 || o_ == 4; }
    constexpr bool omega2_free() const noexcept { return o_ == 3 || o_ == 4; }

    // Fixed-effect columns: 1, x, x^2, [c x], [c x^2].
    constexpr int mean_count() const noexcept { return 3 + alpha1_free() + alpha2_free(); }
    // Random-effect columns: 1, [x], [x^2].
    constexpr int random_count() const noexcept { return 1 + omega1_free() + omega2_free(); }
    // Mean coefficients + random-effect variances + sigma^2.
    constexpr int parameter_count() const noexcept { return mean_count() + random_count() + 1; }

    // Position in enumeration order (O-major): 0 for O1M1 .. 15 for O4M4.
    constexpr int index() const noexcept { return (o_ - 1) * 4 + (m_ - 1); }

    // Which psi components (0, 1, 2) carry a random effect.
    constexpr std::array<bool, 3> random_components() const noexcept {
        return {true, omega1_free(), omega2_free()};
    }

    std::string id() const;
    static std::optional<CandidateModel> parse(std::string_view id);

    friend constexpr bool operator==(const CandidateModel&, const CandidateModel&) = default;

private:
    constexpr void validate() const {
        if (o_ < 1 || o_ > 4 || m_ < 1 || m_ > 4) throw std::invalid_argument("candidate index out of range");
    }

    int o_;
    int m_;
};

// All 16 candidates, O1..O4 outer, M1..M4 inner.
std::vector<CandidateModel> enumerate_candidates();

// Parameter labels, in the order used by ParameterVector.
std::vector<std::string> mean_labels(const CandidateModel& candidate);
std::vector<std::string> variance_labels(const CandidateModel& candidate);
std::vector<std::string> parameter_labels(const CandidateModel& candidate);

struct DesignBlocks {
    Eigen::MatrixXd X;  // n_i x mean_count
    Eigen::MatrixXd Z;  // n_i x random_count
};

DesignBlocks build_design(const CandidateModel& candidate, const SubjectBlock& block);

/**
 * The 3 x mean_count map from free mean coefficients to psi_i, i.e. the
 * C_i loading matrix restricted to the candidate's free columns; X_i = [1 x x^2] K_i.
 */
Eigen::MatrixXd psi_loading(const CandidateModel& candidate, double c);

// 3 x random_count selector of the random psi components; Z_i = [1 x x^2] S.
Eigen::MatrixXd random_selector(const CandidateModel& candidate);

// Generating parameters with the zero pattern of a (M, O) structure.
struct TrueParameters {
    std::array<double, 3> mu{};
    std::array<double, 2> alpha{};
    std::array<double, 3> omega2{};
    double sigma2 = 1.0;

    bool consistent_with(const CandidateModel& candidate) const noexcept;
};

/**
 * Draws a balanced dataset from the generating model. Subject i gets
 * c_i ~ N(0,1) and eta_i from the subject stream {kSubject, i}; eps_ij comes
 * from the observation stream {kObservation, i, j}. The grid
 * x_j = 10 (j-1)/(n_sub-1) is shared by all subjects.
 */
Dataset generate_dataset(const SimulationDesign& design, const TrueParameters& truth, std::uint64_t seed);

}  // namespace lmmbic
