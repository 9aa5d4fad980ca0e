#include "lmmbic/estimation.hpp"

#include "lmmbic/errors.hpp"
#include "lmmbic/nelder_mead.hpp"
#include "lmmbic/random.hpp"
#include "profiled_likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lmmbic {

void FitOptions::validate() const {
    if (!(rel_tolerance > 0.0)) throw std::invalid_argument("rel_tolerance must be positive");
    if (!(variance_floor > 0.0)) throw std::invalid_argument("variance_floor must be positive");
    if (n_restarts < 1) throw std::invalid_argument("n_restarts must be at least 1");
    if (max_iterations < 1) throw std::invalid_argument("max_iterations must be at least 1");
}

namespace {

void check_identifiable(const CandidateModel& candidate, const Dataset& data) {
    if ((candidate.alpha1_free() || candidate.alpha2_free()) && data.distinct_c_count() < 2) {
        throw UnidentifiableError(candidate.id() + ": alpha terms need at least two distinct c values");
    }
}

}  // namespace

ProfiledBeta profile_beta(const Eigen::VectorXd& omega2, double sigma2, const CandidateModel& candidate,
                          const Dataset& data) {
    if (omega2.size() != candidate.random_count()) throw DimensionError("omega2 length does not match candidate");
    if (!(sigma2 > 0.0) || (omega2.array() < 0.0).any()) throw std::invalid_argument("invalid variance parameters");
    check_identifiable(candidate, data);
    detail::ProfiledLikelihood likelihood(candidate, data);
    const auto result = likelihood.evaluate(omega2, sigma2);
    return {result.beta, result.loglik, likelihood.score(result.beta)};
}

FittedModel fit_ml(const CandidateModel& candidate, const Dataset& data, const FitOptions& options) {
    options.validate();
    const auto p = static_cast<std::size_t>(candidate.parameter_count());
    if (data.n() <= p) {
        throw std::invalid_argument(candidate.id() + ": need more than " + std::to_string(p) + " observations, have " +
                                    std::to_string(data.n()));
    }
    check_identifiable(candidate, data);
    detail::ProfiledLikelihood likelihood(candidate, data);

    // Moment start from OLS on the stacked design.
    Eigen::MatrixXd X(static_cast<Eigen::Index>(data.n()), candidate.mean_count());
    Eigen::VectorXd y(X.rows());
    Eigen::Index row = 0;
    for (const auto& subject : data.subjects()) {
        const auto design = build_design(candidate, subject);
        X.middleRows(row, design.X.rows()) = design.X;
        y.segment(row, subject.y.size()) = subject.y;
        row += design.X.rows();
    }
    const Eigen::VectorXd beta_ols = X.colPivHouseholderQr().solve(y);
    const double sigma2_ols = std::max((y - X * beta_ols).squaredNorm() / static_cast<double>(data.n()),
                                       options.variance_floor);

    const Eigen::Index q = candidate.random_count();
    const Eigen::Index dim = q + 1;
    Eigen::VectorXd start(dim);
    start.head(q).setConstant(std::log(std::max(0.5 * sigma2_ols, options.variance_floor)));
    start[q] = std::log(sigma2_ols);

    const double log_floor = std::log(options.variance_floor);
    int evaluations = 0;
    auto objective = [&](const Eigen::VectorXd& theta) {
        try {
            const Eigen::VectorXd variances = theta.array().exp();
            return -likelihood.evaluate(variances.head(q), variances[q]).loglik;
        } catch (const FactorizationError&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    NelderMeadOptions nm;
    nm.max_iterations = options.max_iterations;
    nm.rel_tolerance = options.rel_tolerance;
    nm.lower_bound = log_floor;

    FittedModel fit{candidate, {}, -std::numeric_limits<double>::infinity(), false, {}, {}, data.n(), data.N(), 0, {}};
    NelderMeadResult best;
    RandomStream jitter(options.seed, {static_cast<std::uint64_t>(StreamPurpose::kFitJitter), 0, 0});
    for (int restart = 0; restart < options.n_restarts; ++restart) {
        Eigen::VectorXd x0 = start;
        if (restart > 0) {
            for (Eigen::Index k = 0; k < dim; ++k) x0[k] += jitter.uniform(-1.0, 1.0);
        }
        auto run = nelder_mead_minimize(objective, x0, nm);
        evaluations += run.evaluations;
        fit.restart_logliks.push_back(-run.value);
        if (run.value < best.value) best = std::move(run);
    }
    if (!std::isfinite(best.value)) throw FactorizationError(candidate.id() + ": no restart reached a finite likelihood");

    nm.initial_step = 0.1;
    auto polished = nelder_mead_minimize(objective, best.x, nm);
    evaluations += polished.evaluations;
    const bool converged = polished.converged || best.converged;
    if (polished.value <= best.value) best = std::move(polished);

    Eigen::VectorXd variances = best.x.array().exp();
    auto current = likelihood.evaluate(variances.head(q), variances[q]);
    ++evaluations;

    fit.boundary.assign(static_cast<std::size_t>(dim), false);
    for (Eigen::Index k = 0; k < q; ++k) {
        Eigen::VectorXd trial = variances;
        trial[k] = 0.0;
        try {
            const auto snapped = likelihood.evaluate(trial.head(q), trial[q]);
            ++evaluations;
            if (snapped.loglik >= current.loglik - 1e-9) {
                variances = trial;
                current = snapped;
                fit.boundary[static_cast<std::size_t>(k)] = true;
            }
        } catch (const FactorizationError&) {
        }
    }
    fit.boundary[static_cast<std::size_t>(q)] = best.x[q] <= log_floor;

    fit.theta_hat.beta = current.beta;
    fit.theta_hat.omega2 = variances.head(q);
    fit.theta_hat.sigma2 = variances[q];
    fit.loglik = current.loglik;
    fit.converged = converged && std::isfinite(current.loglik);
    fit.evaluations = evaluations;
    fit.V_blocks = marginal_covariances(candidate, data, fit.theta_hat.omega2, fit.theta_hat.sigma2);
    return fit;
}

}  // namespace lmmbic
