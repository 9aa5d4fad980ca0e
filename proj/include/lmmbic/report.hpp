#pragma once

#include "lmmbic/criteria.hpp"
#include "lmmbic/estimation.hpp"
#include "lmmbic/simulation.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace lmmbic {

// design,truth,criterion,correct,replicates,frequency
std::string results_csv(const FrequencyTable& table);
// design,criterion,frequency
std::string summary_csv(const FrequencyTable& table);
// One panel per design; a group of four bars (BIC_N blue, BIC_n green,
// BIC_ne yellow, BIC_h red) per generating structure plus a pooled group.
std::string figure_svg(const FrequencyTable& table);

// Plot-area height of each panel in figure.svg; bar height = frequency * this.
inline constexpr double kFigurePlotHeight = 200.0;

// Writes results.csv, summary.csv and figure.svg into out_dir (created if
// missing). Throws before writing anything if the table has no designs.
void emit_report(const FrequencyTable& table, const std::filesystem::path& out_dir);

nlohmann::json fit_to_json(const FittedModel& fit);
nlohmann::json report_to_json(const BicReport& report, const std::vector<Criterion>& criteria);
nlohmann::json selection_to_json(const std::vector<BicReport>& reports, const std::vector<Criterion>& criteria);

}  // namespace lmmbic
