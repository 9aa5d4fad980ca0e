#include "lmmbic/cli.hpp"

#include "lmmbic/candidate.hpp"
#include "lmmbic/criteria.hpp"
#include "lmmbic/errors.hpp"
#include "lmmbic/ess.hpp"
#include "lmmbic/estimation.hpp"
#include "lmmbic/log.hpp"
#include "lmmbic/report.hpp"
#include "lmmbic/simulation.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

namespace lmmbic {

namespace {

// Invalid flag values detected after CLI11 has parsed the command line.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

CandidateModel require_candidate(const std::string& id) {
    const auto candidate = CandidateModel::parse(id);
    if (!candidate) throw UsageError("invalid candidate id '" + id + "' (expected O{1-4}M{1-4})");
    return *candidate;
}

std::vector<Criterion> parse_criteria(const std::string& list) {
    std::vector<Criterion> criteria;
    std::size_t start = 0;
    while (true) {
        const auto comma = list.find(',', start);
        const auto token = list.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        const auto criterion = parse_criterion(token);
        if (!criterion) throw UsageError("invalid criterion '" + token + "' (expected N, n, ne or h)");
        if (std::find(criteria.begin(), criteria.end(), *criterion) == criteria.end()) criteria.push_back(*criterion);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    std::sort(criteria.begin(), criteria.end());
    return criteria;
}

void emit_json(const nlohmann::json& doc, const std::string& out_path, std::ostream& out) {
    const std::string text = doc.dump(2) + "\n";
    if (out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
    file << text;
    if (!file) throw std::runtime_error("cannot write '" + out_path + "'");
    log::info("wrote " + out_path);
}

unsigned resolve_threads(int flag) {
    if (flag > 0) return static_cast<unsigned>(flag);
    if (const char* env = std::getenv("LMMBIC_THREADS")) {
        char* end = nullptr;
        const long value = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || value < 1) throw UsageError("LMMBIC_THREADS must be a positive integer");
        return static_cast<unsigned>(value);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Model selection for linear mixed-effects models under four BIC variants", "lmmbic"};
    app.require_subcommand(1);
    int verbosity = 0;
    bool quiet = false;
    app.add_flag("-v,--verbose", verbosity, "More log output on stderr (repeatable)");
    app.add_flag("-q,--quiet", quiet, "Only log errors");

    std::string data_path, candidate_id, out_path, criteria_list = "N,n,ne,h", designs, truth_id;
    std::uint64_t seed = 1;
    int replicates = 25;
    int threads = 0;

    auto* fit = app.add_subcommand("fit", "Fit one candidate by maximum likelihood");
    fit->add_option("--data", data_path, "Input data (subject,x,c,y)")->required();
    fit->add_option("--candidate", candidate_id, "Candidate id, e.g. O2M1")->required();
    fit->add_option("--out", out_path, "Write the JSON report here instead of stdout");
    fit->add_option("--seed", seed, "Seed for the optimizer restarts");

    auto* select = app.add_subcommand("select", "Fit all 16 candidates and rank them");
    select->add_option("--data", data_path, "Input data (subject,x,c,y)")->required();
    select->add_option("--criteria", criteria_list, "Comma list of N, n, ne, h");
    select->add_option("--out", out_path, "Write the JSON report here instead of stdout");
    select->add_option("--seed", seed, "Seed for the optimizer restarts");

    auto* ess = app.add_subcommand("ess", "Effective sample size of a fitted candidate");
    ess->add_option("--data", data_path, "Input data (subject,x,c,y)")->required();
    ess->add_option("--candidate", candidate_id, "Candidate id, e.g. O1M1")->required();
    ess->add_option("--out", out_path, "Write the JSON report here instead of stdout");
    ess->add_option("--seed", seed, "Seed for the optimizer restarts");

    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo selection study");
    simulate->add_option("--design", designs, "Comma list of designs a, b, c, d")->required();
    simulate->add_option("--replicates", replicates, "Replicates per (design, true model)")->required();
    simulate->add_option("--seed", seed, "Study seed")->required();
    simulate->add_option("--out", out_path, "Output directory")->required();
    simulate->add_option("--threads", threads, "Worker threads (default: LMMBIC_THREADS or all cores)");

    auto* generate = app.add_subcommand("generate", "Draw one dataset from the study's generating model");
    generate->add_option("--design", designs, "Design label a, b, c or d")->required();
    generate->add_option("--truth", truth_id, "Generating candidate id")->required();
    generate->add_option("--seed", seed, "Seed")->required();
    generate->add_option("--out", out_path, "Write the CSV here instead of stdout");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    log::set_level(quiet            ? log::Level::kError
                   : verbosity >= 2 ? log::Level::kDebug
                   : verbosity == 1 ? log::Level::kInfo
                                    : log::Level::kWarn);

    try {
        FitOptions fit_options;
        fit_options.seed = seed;

        if (*fit) {
            const auto candidate = require_candidate(candidate_id);
            const Dataset data = read_dataset_file(data_path);
            const FittedModel fitted = fit_ml(candidate, data, fit_options);
            if (!fitted.converged) log::warn(candidate.id() + ": optimizer did not converge");
            emit_json(fit_to_json(fitted), out_path, out);
        } else if (*select) {
            const auto criteria = parse_criteria(criteria_list);
            const Dataset data = read_dataset_file(data_path);
            std::vector<BicReport> reports;
            for (const auto& candidate : enumerate_candidates()) {
                try {
                    const FittedModel fitted = fit_ml(candidate, data, fit_options);
                    if (!fitted.converged) {
                        log::warn(candidate.id() + ": did not converge, excluded");
                        continue;
                    }
                    reports.push_back(make_report(fitted));
                } catch (const UnidentifiableError& e) {
                    log::warn(std::string(e.what()) + ", excluded");
                }
            }
            if (reports.empty()) throw std::runtime_error("no candidate could be fitted");
            emit_json(selection_to_json(reports, criteria), out_path, out);
        } else if (*ess) {
            const auto candidate = require_candidate(candidate_id);
            const Dataset data = read_dataset_file(data_path);
            const FittedModel fitted = fit_ml(candidate, data, fit_options);
            emit_json({{"candidate", candidate.id()},
                       {"converged", fitted.converged},
                       {"n", data.n()},
                       {"N", data.N()},
                       {"n_e", effective_sample_size(fitted)}},
                      out_path, out);
        } else if (*simulate) {
            StudyConfig config;
            try {
                config.designs = parse_design_list(designs);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            if (replicates < 1) throw UsageError("--replicates must be at least 1");
            config.replicates = replicates;
            config.seed = seed;
            config.threads = resolve_threads(threads);
            log::info("running " + std::to_string(config.designs.size() * 16 * static_cast<std::size_t>(replicates)) +
                      " replicates on " + std::to_string(config.threads) + " threads");
            const FrequencyTable table = run_study(config);
            emit_report(table, out_path);
            const double rate = table.fits_attempted > 0
                                    ? static_cast<double>(table.fits_excluded) / static_cast<double>(table.fits_attempted)
                                    : 0.0;
            log::info("excluded fits: " + std::to_string(table.fits_excluded) + " of " +
                      std::to_string(table.fits_attempted) + " (rate " + std::to_string(rate) +
                      "); invalid replicates: " + std::to_string(table.invalid_replicates));
            out << summary_csv(table);
        } else if (*generate) {
            const auto design = designs.size() == 1 ? design_from_label(designs[0]) : std::nullopt;
            if (!design) throw UsageError("invalid design label '" + designs + "' (expected a, b, c or d)");
            const auto truth_model = require_candidate(truth_id);
            RandomStream rng(seed, {static_cast<std::uint64_t>(StreamPurpose::kTruth), 0, 0});
            const Dataset data = generate_dataset(*design, sample_true_parameters(truth_model, rng), seed);
            if (out_path.empty()) {
                write_dataset(out, data);
            } else {
                std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
                write_dataset(file, data);
                if (!file) throw std::runtime_error("cannot write '" + out_path + "'");
            }
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace lmmbic
