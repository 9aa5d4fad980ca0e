#include "lmmbic/criteria.hpp"

#include "lmmbic/ess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lmmbic {

std::string_view criterion_name(Criterion criterion) {
    switch (criterion) {
        case Criterion::kN: return "BIC_N";
        case Criterion::kn: return "BIC_n";
        case Criterion::kne: return "BIC_ne";
        case Criterion::kh: return "BIC_h";
    }
    return "?";
}

std::string_view criterion_field(Criterion criterion) {
    switch (criterion) {
        case Criterion::kN: return "bic_N";
        case Criterion::kn: return "bic_n";
        case Criterion::kne: return "bic_ne";
        case Criterion::kh: return "bic_h";
    }
    return "?";
}

std::optional<Criterion> parse_criterion(std::string_view flag) {
    if (flag == "N") return Criterion::kN;
    if (flag == "n") return Criterion::kn;
    if (flag == "ne") return Criterion::kne;
    if (flag == "h") return Criterion::kh;
    return std::nullopt;
}

double bic(double loglik, double p, double sample_size) {
    if (!(sample_size > 0.0)) throw std::invalid_argument("sample size must be positive");
    if (p < 0.0) throw std::invalid_argument("parameter count must be nonnegative");
    return -2.0 * loglik + p * std::log(sample_size);
}

ParameterPartition partition_parameters(const CandidateModel& candidate) {
    const std::array<bool, 3> random = candidate.random_components();
    ParameterPartition part;
    part.theta_F.emplace_back("sigma_sq");

    const std::array<std::string, 3> mu{"mu0", "mu1", "mu2"};
    for (std::size_t k = 0; k < 3; ++k) (random[k] ? part.theta_R : part.theta_F).push_back(mu[k]);
    // alpha_k loads on psi_k.
    if (candidate.alpha1_free()) (random[1] ? part.theta_R : part.theta_F).emplace_back("alpha1");
    if (candidate.alpha2_free()) (random[2] ? part.theta_R : part.theta_F).emplace_back("alpha2");
    for (auto& label : variance_labels(candidate)) part.theta_R.push_back(std::move(label));
    return part;
}

double bic_h(double loglik, const ParameterPartition& partition, double N, double n) {
    if (!(N > 0.0) || !(n > 0.0)) throw std::invalid_argument("subject and observation counts must be positive");
    return -2.0 * loglik + static_cast<double>(partition.theta_R.size()) * std::log(N) +
           static_cast<double>(partition.theta_F.size()) * std::log(n);
}

BayesFactor bayes_factor_from_bics(double bic1, double bic2) {
    if (!std::isfinite(bic1) || !std::isfinite(bic2)) throw std::invalid_argument("BIC values must be finite");
    BayesFactor bf;
    bf.log_value = -0.5 * (bic1 - bic2);
    static const double kMaxLog = std::log(std::numeric_limits<double>::max());
    static const double kMinLog = std::log(std::numeric_limits<double>::min());
    if (bf.log_value > kMaxLog) {
        bf.value = std::numeric_limits<double>::max();
        bf.saturated = true;
    } else if (bf.log_value < kMinLog) {
        bf.value = std::numeric_limits<double>::min();
        bf.saturated = true;
    } else {
        bf.value = std::exp(bf.log_value);
    }
    return bf;
}

JeffreysEvidence jeffreys_label(double bf) {
    if (!(bf > 0.0)) throw std::invalid_argument("Bayes factor must be positive");
    if (bf < 1.0) return JeffreysEvidence::kNegative;
    if (bf < std::sqrt(10.0)) return JeffreysEvidence::kBarelyWorthMentioning;
    if (bf < 10.0) return JeffreysEvidence::kSubstantial;
    if (bf < std::pow(10.0, 1.5)) return JeffreysEvidence::kStrong;
    if (bf < 100.0) return JeffreysEvidence::kVeryStrong;
    return JeffreysEvidence::kDecisive;
}

BicEvidence delta_bic_label(double delta) {
    if (!(delta >= 0.0)) throw std::invalid_argument("BIC difference must be nonnegative");
    if (delta < 2.0) return BicEvidence::kBareMention;
    if (delta < 6.0) return BicEvidence::kPositive;
    if (delta < 10.0) return BicEvidence::kStrong;
    return BicEvidence::kVeryStrong;
}

std::string_view to_string(JeffreysEvidence evidence) {
    switch (evidence) {
        case JeffreysEvidence::kNegative: return "Negative";
        case JeffreysEvidence::kBarelyWorthMentioning: return "Barely worth mentioning";
        case JeffreysEvidence::kSubstantial: return "Substantial";
        case JeffreysEvidence::kStrong: return "Strong";
        case JeffreysEvidence::kVeryStrong: return "Very strong";
        case JeffreysEvidence::kDecisive: return "Decisive";
    }
    return "?";
}

std::string_view to_string(BicEvidence evidence) {
    switch (evidence) {
        case BicEvidence::kBareMention: return "Not worth more than a bare mention";
        case BicEvidence::kPositive: return "Positive";
        case BicEvidence::kStrong: return "Strong";
        case BicEvidence::kVeryStrong: return "Very Strong";
    }
    return "?";
}

double BicReport::value(Criterion criterion) const {
    switch (criterion) {
        case Criterion::kN: return bic_N;
        case Criterion::kn: return bic_n;
        case Criterion::kne: return bic_ne;
        case Criterion::kh: return bic_h;
    }
    throw std::invalid_argument("unknown criterion");
}

BicReport make_report(const CandidateModel& candidate, double loglik, std::size_t n, std::size_t N, double n_e) {
    BicReport r{candidate, loglik, candidate.parameter_count(), n, N, n_e, 0, 0, 0, 0,
                partition_parameters(candidate)};
    const auto p = static_cast<double>(r.p);
    r.bic_N = bic(loglik, p, static_cast<double>(N));
    r.bic_n = bic(loglik, p, static_cast<double>(n));
    r.bic_ne = bic(loglik, p, n_e);
    r.bic_h = bic_h(loglik, r.partition, static_cast<double>(N), static_cast<double>(n));
    return r;
}

BicReport make_report(const FittedModel& fit) {
    return make_report(fit.candidate, fit.loglik, fit.n, fit.N, effective_sample_size(fit));
}

namespace {

bool ranks_before(const BicReport& a, const BicReport& b, Criterion criterion) {
    const double va = a.value(criterion);
    const double vb = b.value(criterion);
    if (va != vb) return va < vb;
    if (a.p != b.p) return a.p < b.p;
    return a.candidate.index() < b.candidate.index();
}

}  // namespace

CandidateModel select_model(const std::vector<BicReport>& reports, Criterion criterion) {
    if (reports.empty()) throw std::invalid_argument("no candidates to select from");
    const auto best = std::min_element(reports.begin(), reports.end(), [criterion](const auto& a, const auto& b) {
        return ranks_before(a, b, criterion);
    });
    return best->candidate;
}

SelectionOutcome compare_top_two(const std::vector<BicReport>& reports, Criterion criterion) {
    if (reports.empty()) throw std::invalid_argument("no candidates to select from");
    std::vector<const BicReport*> ranked;
    for (const auto& r : reports) ranked.push_back(&r);
    std::stable_sort(ranked.begin(), ranked.end(),
                     [criterion](const auto* a, const auto* b) { return ranks_before(*a, *b, criterion); });
    SelectionOutcome out{criterion, ranked.front()->candidate, std::nullopt, 0.0, {}};
    if (ranked.size() > 1) {
        out.runner_up = ranked[1]->candidate;
        const double winner = ranked[0]->value(criterion);
        const double second = ranked[1]->value(criterion);
        out.delta_bic = second - winner;
        out.bayes_factor = bayes_factor_from_bics(winner, second);
    }
    return out;
}

}  // namespace lmmbic
