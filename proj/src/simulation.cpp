#include "lmmbic/simulation.hpp"

#include "lmmbic/log.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <stdexcept>
#include <thread>

namespace lmmbic {

void StudyConfig::validate() const {
    if (designs.empty()) throw std::invalid_argument("no designs selected");
    if (replicates < 1) throw std::invalid_argument("replicates must be at least 1");
    if (sigma2_override && !(*sigma2_override > 0.0)) throw std::invalid_argument("sigma2 override must be positive");
    fit.validate();
}

TrueParameters sample_true_parameters(const CandidateModel& truth, RandomStream& rng) {
    TrueParameters t;
    t.sigma2 = 1.0;
    t.mu = {rng.normal(0.01, 1.0), rng.normal(0.005, 1.0), rng.normal(0.0025, 1.0)};
    t.alpha = {rng.normal(0.01, 1.0), rng.normal(0.01, 1.0)};
    for (auto& w : t.omega2) w = rng.uniform(0.01, 1.01);
    if (!truth.alpha1_free()) t.alpha[0] = 0.0;
    if (!truth.alpha2_free()) t.alpha[1] = 0.0;
    if (!truth.omega1_free()) t.omega2[1] = 0.0;
    if (!truth.omega2_free()) t.omega2[2] = 0.0;
    return t;
}

std::uint64_t replicate_seed(std::uint64_t study_seed, const SimulationDesign& design, const CandidateModel& truth,
                             int replicate_index) {
    return derive_seed(study_seed, static_cast<unsigned char>(design.label), truth.index(), replicate_index);
}

ReplicateOutcome run_replicate(const SimulationDesign& design, const CandidateModel& true_candidate,
                               int replicate_index, const StudyConfig& config) {
    const std::uint64_t seed = replicate_seed(config.seed, design, true_candidate, replicate_index);
    RandomStream truth_rng(seed, {static_cast<std::uint64_t>(StreamPurpose::kTruth), 0, 0});
    TrueParameters truth = sample_true_parameters(true_candidate, truth_rng);
    if (config.sigma2_override) truth.sigma2 = *config.sigma2_override;
    const Dataset data = generate_dataset(design, truth, seed);

    FitOptions options = config.fit;
    options.seed = derive_seed(config.fit.seed, seed);

    ReplicateOutcome outcome;
    std::vector<BicReport> reports;
    for (const auto& candidate : enumerate_candidates()) {
        try {
            const FittedModel fit = fit_ml(candidate, data, options);
            if (!fit.converged) {
                log::debug("design " + std::string(1, design.label) + " truth " + true_candidate.id() + " rep " +
                           std::to_string(replicate_index) + ": " + candidate.id() + " did not converge");
                ++outcome.excluded_fits;
                continue;
            }
            reports.push_back(make_report(fit));
        } catch (const std::exception& e) {
            log::debug("design " + std::string(1, design.label) + " truth " + true_candidate.id() + " rep " +
                       std::to_string(replicate_index) + ": " + candidate.id() + " failed: " + e.what());
            ++outcome.excluded_fits;
        }
    }
    if (reports.empty()) return outcome;
    for (std::size_t k = 0; k < kAllCriteria.size(); ++k) outcome.selected[k] = select_model(reports, kAllCriteria[k]);
    return outcome;
}

FrequencyTable::FrequencyTable(std::vector<SimulationDesign> designs)
    : designs_(std::move(designs)), cells_(designs_.size() * 16 * kAllCriteria.size()) {}

std::size_t FrequencyTable::offset(std::size_t design, const CandidateModel& truth, Criterion criterion) const {
    if (design >= designs_.size()) throw std::out_of_range("design index out of range");
    return (design * 16 + static_cast<std::size_t>(truth.index())) * kAllCriteria.size() +
           static_cast<std::size_t>(criterion);
}

FrequencyCell& FrequencyTable::cell(std::size_t design, const CandidateModel& truth, Criterion criterion) {
    return cells_[offset(design, truth, criterion)];
}

const FrequencyCell& FrequencyTable::cell(std::size_t design, const CandidateModel& truth, Criterion criterion) const {
    return cells_[offset(design, truth, criterion)];
}

FrequencyCell FrequencyTable::aggregate(std::size_t design, Criterion criterion) const {
    FrequencyCell total;
    for (const auto& truth : enumerate_candidates()) {
        const auto& c = cell(design, truth, criterion);
        total.correct += c.correct;
        total.replicates += c.replicates;
    }
    return total;
}

FrequencyTable run_study(const StudyConfig& config) {
    config.validate();
    const auto candidates = enumerate_candidates();

    struct WorkItem {
        std::size_t design;
        std::size_t truth;
        int replicate;
    };
    std::vector<WorkItem> work;
    for (std::size_t d = 0; d < config.designs.size(); ++d) {
        for (std::size_t t = 0; t < candidates.size(); ++t) {
            for (int r = 0; r < config.replicates; ++r) work.push_back({d, t, r});
        }
    }

    std::vector<ReplicateOutcome> outcomes(work.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        while (!failed.load()) {
            const std::size_t i = next.fetch_add(1);
            if (i >= work.size()) return;
            try {
                const auto& item = work[i];
                outcomes[i] = run_replicate(config.designs[item.design], candidates[item.truth], item.replicate, config);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };

    unsigned threads = config.threads > 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(work.size(), 1)));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    FrequencyTable table(config.designs);
    for (std::size_t i = 0; i < work.size(); ++i) {
        const auto& item = work[i];
        const auto& outcome = outcomes[i];
        const auto& truth = candidates[item.truth];
        table.fits_attempted += static_cast<long long>(candidates.size());
        table.fits_excluded += outcome.excluded_fits;
        if (!outcome.valid()) {
            ++table.invalid_replicates;
            continue;
        }
        for (std::size_t k = 0; k < kAllCriteria.size(); ++k) {
            auto& c = table.cell(item.design, truth, kAllCriteria[k]);
            ++c.replicates;
            if (*outcome.selected[k] == truth) ++c.correct;
        }
    }
    return table;
}

}  // namespace lmmbic
