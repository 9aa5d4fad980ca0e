#include "lmmbic/report.hpp"

#include "lmmbic/ess.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lmmbic {

namespace {

std::string fixed(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, value);
    return buf;
}

void require_designs(const FrequencyTable& table) {
    if (table.designs().empty()) throw std::invalid_argument("frequency table has no designs");
}

constexpr std::array<const char*, 4> kColors{"#1f77b4", "#2ca02c", "#f2c40f", "#d62728"};

}  // namespace

std::string results_csv(const FrequencyTable& table) {
    require_designs(table);
    std::string out = "design,truth,criterion,correct,replicates,frequency\n";
    for (std::size_t d = 0; d < table.designs().size(); ++d) {
        for (const auto& truth : enumerate_candidates()) {
            for (const auto criterion : kAllCriteria) {
                const auto& c = table.cell(d, truth, criterion);
                out += std::string(1, table.designs()[d].label) + ',' + truth.id() + ',' +
                       std::string(criterion_name(criterion)) + ',' + std::to_string(c.correct) + ',' +
                       std::to_string(c.replicates) + ',' + fixed(c.frequency(), 6) + '\n';
            }
        }
    }
    return out;
}

std::string summary_csv(const FrequencyTable& table) {
    require_designs(table);
    std::string out = "design,criterion,frequency\n";
    for (std::size_t d = 0; d < table.designs().size(); ++d) {
        for (const auto criterion : kAllCriteria) {
            out += std::string(1, table.designs()[d].label) + ',' + std::string(criterion_name(criterion)) + ',' +
                   fixed(table.aggregate(d, criterion).frequency(), 6) + '\n';
        }
    }
    return out;
}

std::string figure_svg(const FrequencyTable& table) {
    require_designs(table);
    constexpr double kBar = 6.0;
    constexpr double kGroupGap = 8.0;
    constexpr double kGroupWidth = 4 * kBar + kGroupGap;
    constexpr int kGroups = 17;
    constexpr double kPanelLeft = 40.0;
    constexpr double kPanelWidth = kPanelLeft + kGroups * kGroupWidth + 20.0;
    constexpr double kTop = 70.0;
    constexpr double kHeight = kTop + kFigurePlotHeight + 60.0;
    const double width = kPanelWidth * static_cast<double>(table.designs().size());
    const double base = kTop + kFigurePlotHeight;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width, 0) << "\" height=\""
        << fixed(kHeight, 0) << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << fixed(width, 0) << "\" height=\"" << fixed(kHeight, 0)
        << "\" fill=\"white\"/>\n";

    svg << "<g class=\"legend\">\n";
    for (std::size_t k = 0; k < kAllCriteria.size(); ++k) {
        const double x = 10.0 + 90.0 * static_cast<double>(k);
        svg << "<rect x=\"" << fixed(x, 1) << "\" y=\"8\" width=\"10\" height=\"10\" fill=\"" << kColors[k] << "\"/>";
        svg << "<text x=\"" << fixed(x + 14, 1) << "\" y=\"17\">" << criterion_name(kAllCriteria[k]) << "</text>\n";
    }
    svg << "</g>\n";

    const auto candidates = enumerate_candidates();
    for (std::size_t d = 0; d < table.designs().size(); ++d) {
        const auto& design = table.designs()[d];
        const double x0 = kPanelWidth * static_cast<double>(d) + kPanelLeft;
        svg << "<g class=\"panel\" data-design=\"" << design.label << "\">\n";
        svg << "<text x=\"" << fixed(x0, 1) << "\" y=\"45\" font-size=\"12\">(" << design.label << ") N=" << design.N
            << ", n_sub=" << design.n_sub << "</text>\n";
        for (int tick = 0; tick <= 4; ++tick) {
            const double y = base - kFigurePlotHeight * tick / 4.0;
            svg << "<line x1=\"" << fixed(x0, 1) << "\" y1=\"" << fixed(y, 1) << "\" x2=\""
                << fixed(x0 + kGroups * kGroupWidth, 1) << "\" y2=\"" << fixed(y, 1)
                << "\" stroke=\"#dddddd\"/><text x=\"" << fixed(x0 - 4, 1) << "\" y=\"" << fixed(y + 3, 1)
                << "\" text-anchor=\"end\">" << fixed(tick / 4.0, 2) << "</text>\n";
        }
        for (int g = 0; g < kGroups; ++g) {
            const bool pooled = g == 16;
            const std::string group = pooled ? "all" : candidates[static_cast<std::size_t>(g)].id();
            const double gx = x0 + g * kGroupWidth + kGroupGap / 2;
            for (std::size_t k = 0; k < kAllCriteria.size(); ++k) {
                const auto criterion = kAllCriteria[k];
                const double freq = pooled ? table.aggregate(d, criterion).frequency()
                                           : table.cell(d, candidates[static_cast<std::size_t>(g)], criterion).frequency();
                const double h = freq * kFigurePlotHeight;
                svg << "<rect class=\"bar\" data-design=\"" << design.label << "\" data-truth=\"" << group
                    << "\" data-criterion=\"" << criterion_name(criterion) << "\" x=\""
                    << fixed(gx + kBar * static_cast<double>(k), 1) << "\" y=\"" << fixed(base - h, 4)
                    << "\" width=\"" << fixed(kBar, 1) << "\" height=\"" << fixed(h, 4) << "\" fill=\"" << kColors[k]
                    << "\"/>\n";
            }
            svg << "<text x=\"" << fixed(gx + 2 * kBar, 1) << "\" y=\"" << fixed(base + 8, 1)
                << "\" text-anchor=\"end\" transform=\"rotate(-60 " << fixed(gx + 2 * kBar, 1) << ' '
                << fixed(base + 8, 1) << ")\">" << group << "</text>\n";
        }
        svg << "<line x1=\"" << fixed(x0, 1) << "\" y1=\"" << fixed(base, 1) << "\" x2=\""
            << fixed(x0 + kGroups * kGroupWidth, 1) << "\" y2=\"" << fixed(base, 1) << "\" stroke=\"black\"/>\n";
        svg << "</g>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void emit_report(const FrequencyTable& table, const std::filesystem::path& out_dir) {
    require_designs(table);
    const std::string results = results_csv(table);
    const std::string summary = summary_csv(table);
    const std::string figure = figure_svg(table);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + out_dir.string() + "': " + ec.message());
    auto write = [&](const char* name, const std::string& content) {
        const auto path = out_dir / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << content;
        if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    };
    write("results.csv", results);
    write("summary.csv", summary);
    write("figure.svg", figure);
}

nlohmann::json fit_to_json(const FittedModel& fit) {
    using nlohmann::json;
    const auto& c = fit.candidate;
    json parameters = json::object();
    const auto means = mean_labels(c);
    for (std::size_t k = 0; k < means.size(); ++k) parameters[means[k]] = fit.theta_hat.beta[static_cast<Eigen::Index>(k)];
    const auto variances = variance_labels(c);
    for (std::size_t k = 0; k < variances.size(); ++k) {
        parameters[variances[k]] = fit.theta_hat.omega2[static_cast<Eigen::Index>(k)];
    }
    parameters["sigma_sq"] = fit.theta_hat.sigma2;

    json boundary = json::array();
    for (std::size_t k = 0; k < fit.boundary.size(); ++k) {
        if (fit.boundary[k]) boundary.push_back(k < variances.size() ? variances[k] : std::string("sigma_sq"));
    }

    json blocks = json::array();
    std::vector<json> unique;
    for (const auto& V : fit.V_blocks.unique_blocks()) {
        const Eigen::LLT<Eigen::MatrixXd> llt(V);
        const Eigen::MatrixXd R = correlation_from_covariance(V);
        const auto m = static_cast<double>(V.rows());
        const double off = m > 1 ? (R.sum() - m) / (m * (m - 1)) : 0.0;
        unique.push_back({{"log_det", 2.0 * llt.matrixLLT().diagonal().array().log().sum()},
                          {"mean_variance", V.diagonal().mean()},
                          {"mean_correlation", off},
                          {"magnitude", magnitude(R)}});
    }
    for (std::size_t i = 0; i < fit.V_blocks.subject_count(); ++i) {
        json entry = unique[fit.V_blocks.unique_index(i)];
        entry["n_i"] = fit.V_blocks.block(i).rows();
        blocks.push_back(std::move(entry));
    }

    return {{"candidate", c.id()},
            {"converged", fit.converged},
            {"loglik", fit.loglik},
            {"n", fit.n},
            {"N", fit.N},
            {"p", c.parameter_count()},
            {"parameters", parameters},
            {"boundary", boundary},
            {"evaluations", fit.evaluations},
            {"V_blocks", blocks}};
}

nlohmann::json report_to_json(const BicReport& r, const std::vector<Criterion>& criteria) {
    nlohmann::json j{{"candidate", r.candidate.id()}, {"loglik", r.loglik}, {"p", r.p},
                     {"n", r.n},                     {"N", r.N},           {"n_e", r.n_e}};
    for (const auto criterion : criteria) j[std::string(criterion_field(criterion))] = r.value(criterion);
    j["theta_R"] = r.partition.theta_R;
    j["theta_F"] = r.partition.theta_F;
    return j;
}

nlohmann::json selection_to_json(const std::vector<BicReport>& reports, const std::vector<Criterion>& criteria) {
    using nlohmann::json;
    json candidates = json::array();
    for (const auto& r : reports) candidates.push_back(report_to_json(r, criteria));
    json winners = json::object();
    for (const auto criterion : criteria) {
        const auto outcome = compare_top_two(reports, criterion);
        json w{{"candidate", outcome.winner.id()}};
        if (outcome.runner_up) {
            w["runner_up"] = outcome.runner_up->id();
            w["delta_bic"] = outcome.delta_bic;
            w["delta_bic_evidence"] = std::string(to_string(delta_bic_label(outcome.delta_bic)));
            w["bayes_factor"] = outcome.bayes_factor.value;
            w["log_bayes_factor"] = outcome.bayes_factor.log_value;
            w["bayes_factor_saturated"] = outcome.bayes_factor.saturated;
            w["jeffreys_evidence"] = std::string(to_string(jeffreys_label(outcome.bayes_factor.value)));
        }
        winners[std::string(criterion_name(criterion))] = w;
    }
    const auto& first = reports.front();
    return {{"n", first.n}, {"N", first.N}, {"candidates", candidates}, {"winners", winners}};
}

}  // namespace lmmbic
