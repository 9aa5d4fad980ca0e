#pragma once

#include "lmmbic/candidate.hpp"
#include "lmmbic/dataset.hpp"
#include "lmmbic/lmm_model.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace lmmbic {

struct FitOptions {
    int max_iterations = 2000;
    double rel_tolerance = 1e-8;
    int n_restarts = 3;
    // Lower clamp for every variance; the optimizer works on log(variance).
    double variance_floor = 1e-12;
    // Seeds the jitter of restarts 2..n_restarts.
    std::uint64_t seed = 0;

    void validate() const;
};

struct ProfiledBeta {
    Eigen::VectorXd beta;
    double loglik = 0.0;
    // sum_i X_i' V_i^{-1} (y_i - X_i beta); zero at the GLS solution.
    Eigen::VectorXd score;
};

// GLS estimate of the mean coefficients at fixed variances, with the
// log-likelihood at that point. Throws UnidentifiableError on a rank
// deficient design.
ProfiledBeta profile_beta(const Eigen::VectorXd& omega2, double sigma2, const CandidateModel& candidate,
                          const Dataset& data);

struct FittedModel {
    CandidateModel candidate;
    ParameterVector theta_hat;
    double loglik = 0.0;
    bool converged = false;
    // Variances sitting on the boundary: omega2 entries estimated as exactly
    // zero, or sigma2 at the floor. Same order as variance_labels() + sigma2.
    std::vector<bool> boundary;
    BlockDiagonal V_blocks;
    std::size_t n = 0;
    std::size_t N = 0;
    int evaluations = 0;
    // Best log-likelihood reached by each multistart, before polishing.
    std::vector<double> restart_logliks;
};

/**
 * Maximum-likelihood fit of a candidate.
 *
 * Mean coefficients are profiled out by GLS at every evaluation; the
 * variances are searched by Nelder-Mead on the log scale, from the OLS
 * moment start (sigma2 = OLS residual variance, each omega2 = sigma2 / 2)
 * and n_restarts - 1 jittered copies of it (x exp(U[-1, 1]) per variance).
 * The best restart is polished by one more simplex run. A random-effect
 * variance whose removal does not lower the likelihood is set to exactly
 * zero and flagged as a boundary estimate.
 */
FittedModel fit_ml(const CandidateModel& candidate, const Dataset& data, const FitOptions& options = {});

}  // namespace lmmbic
