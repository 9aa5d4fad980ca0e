#pragma once

#include "lmmbic/candidate.hpp"
#include "lmmbic/criteria.hpp"
#include "lmmbic/design.hpp"
#include "lmmbic/estimation.hpp"
#include "lmmbic/random.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace lmmbic {

struct StudyConfig {
    std::vector<SimulationDesign> designs;
    int replicates = 100;
    std::uint64_t seed = 1;
    FitOptions fit;
    // Worker threads; 0 means std::thread::hardware_concurrency().
    unsigned threads = 0;
    // Replaces the generating residual variance (1 in the study).
    std::optional<double> sigma2_override;

    void validate() const;
};

/**
 * Study generating distribution: sigma^2 = 1, mu0 ~ N(0.01, 1),
 * mu1 ~ N(0.005, 1), mu2 ~ N(0.0025, 1), alpha_k ~ N(0.01, 1),
 * omega_m^2 ~ U[0.01, 1.01]; entries that are not free in the generating
 * structure are zero. All eight values are drawn every time so the stream
 * position does not depend on the structure.
 */
TrueParameters sample_true_parameters(const CandidateModel& truth, RandomStream& rng);

// Seed shared by every random draw of one (design, truth, replicate) cell.
std::uint64_t replicate_seed(std::uint64_t study_seed, const SimulationDesign& design, const CandidateModel& truth,
                             int replicate_index);

struct ReplicateOutcome {
    // Per criterion (kAllCriteria order); empty when the replicate is invalid.
    std::array<std::optional<CandidateModel>, 4> selected;
    int excluded_fits = 0;
    bool valid() const noexcept { return selected[0].has_value(); }
};

// Generates one dataset, fits all 16 candidates, selects under each criterion.
// Fits that throw or do not converge are excluded (and logged).
ReplicateOutcome run_replicate(const SimulationDesign& design, const CandidateModel& true_candidate,
                               int replicate_index, const StudyConfig& config);

struct FrequencyCell {
    int correct = 0;
    int replicates = 0;
    double frequency() const noexcept { return replicates > 0 ? static_cast<double>(correct) / replicates : 0.0; }
};

class FrequencyTable {
public:
    explicit FrequencyTable(std::vector<SimulationDesign> designs);

    const std::vector<SimulationDesign>& designs() const noexcept { return designs_; }

    FrequencyCell& cell(std::size_t design, const CandidateModel& truth, Criterion criterion);
    const FrequencyCell& cell(std::size_t design, const CandidateModel& truth, Criterion criterion) const;
    // Pooled over the 16 generating structures of a design.
    FrequencyCell aggregate(std::size_t design, Criterion criterion) const;

    int invalid_replicates = 0;
    long long fits_attempted = 0;
    long long fits_excluded = 0;

private:
    std::size_t offset(std::size_t design, const CandidateModel& truth, Criterion criterion) const;

    std::vector<SimulationDesign> designs_;
    std::vector<FrequencyCell> cells_;
};

// Every design x 16 truths x replicates. Replicates run on config.threads
// workers; the table does not depend on the thread count.
FrequencyTable run_study(const StudyConfig& config);

}  // namespace lmmbic
