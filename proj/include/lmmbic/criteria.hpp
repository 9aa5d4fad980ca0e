#pragma once

#include "lmmbic/candidate.hpp"
#include "lmmbic/estimation.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lmmbic {

enum class Criterion { kN, kn, kne, kh };

inline constexpr std::array<Criterion, 4> kAllCriteria{Criterion::kN, Criterion::kn, Criterion::kne, Criterion::kh};

// "BIC_N", "BIC_n", "BIC_ne", "BIC_h".
std::string_view criterion_name(Criterion criterion);
// JSON field name: "bic_N", "bic_n", "bic_ne", "bic_h".
std::string_view criterion_field(Criterion criterion);
// CLI spelling: "N", "n", "ne", "h".
std::optional<Criterion> parse_criterion(std::string_view flag);

// -2 loglik + p ln(sample_size).
double bic(double loglik, double p, double sample_size);

// theta_R: mean coefficients entering a psi component that has a free
// variance, plus those variances. theta_F: sigma^2 and the other means.
struct ParameterPartition {
    std::vector<std::string> theta_R;
    std::vector<std::string> theta_F;

    std::size_t size() const noexcept { return theta_R.size() + theta_F.size(); }
};

ParameterPartition partition_parameters(const CandidateModel& candidate);

// -2 loglik + |theta_R| ln N + |theta_F| ln n.
double bic_h(double loglik, const ParameterPartition& partition, double N, double n);

struct BayesFactor {
    double value = 1.0;
    // ln(value), exact even when value saturates.
    double log_value = 0.0;
    // value was clamped to the finite double range.
    bool saturated = false;
};

// exp(-(bic1 - bic2) / 2); > 1 favors model 1.
BayesFactor bayes_factor_from_bics(double bic1, double bic2);

enum class JeffreysEvidence { kNegative, kBarelyWorthMentioning, kSubstantial, kStrong, kVeryStrong, kDecisive };
enum class BicEvidence { kBareMention, kPositive, kStrong, kVeryStrong };

// Intervals are closed on the left: [1, 10^0.5) is "Barely worth mentioning".
JeffreysEvidence jeffreys_label(double bf);
BicEvidence delta_bic_label(double delta);
std::string_view to_string(JeffreysEvidence evidence);
std::string_view to_string(BicEvidence evidence);

struct BicReport {
    CandidateModel candidate;
    double loglik = 0.0;
    int p = 0;
    std::size_t n = 0;
    std::size_t N = 0;
    double n_e = 0.0;
    double bic_N = 0.0;
    double bic_n = 0.0;
    double bic_ne = 0.0;
    double bic_h = 0.0;
    ParameterPartition partition;

    double value(Criterion criterion) const;
};

BicReport make_report(const CandidateModel& candidate, double loglik, std::size_t n, std::size_t N, double n_e);
// Computes n_e from the fit's covariance blocks.
BicReport make_report(const FittedModel& fit);

// Argmin of the criterion; ties go to smaller p, then enumeration order.
CandidateModel select_model(const std::vector<BicReport>& reports, Criterion criterion);

// Winner against runner-up under one criterion.
struct SelectionOutcome {
    Criterion criterion;
    CandidateModel winner;
    std::optional<CandidateModel> runner_up;
    double delta_bic = 0.0;
    BayesFactor bayes_factor;
};

SelectionOutcome compare_top_two(const std::vector<BicReport>& reports, Criterion criterion);

}  // namespace lmmbic
