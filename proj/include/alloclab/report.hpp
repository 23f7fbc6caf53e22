// report.hpp: JSON, CSV and text renderings of analytic and simulated results.
#pragma once
#include <json.hpp>
#include <string>
#include <vector>

#include "alloclab/config.hpp"
#include "alloclab/montecarlo.hpp"

namespace alloclab {

nlohmann::json matrix_json(const Matrix& m);
nlohmann::json summary_json(const AsymptoticSummary& s);

// v, sigma^2 (or the regime note), the lower bound, the variability of the
// SEU / GDL / DBCD models on the same target and, for two-arm DBCD, the
// closed-form cross-check.
nlohmann::json asympt_json(const Scenario& sc);
std::string asympt_text(const Scenario& sc);

// Full study report; embeds the scenario keys and the seed.
nlohmann::json report_json(const Scenario& sc, const StudyReport& rep);

// Columns, in order: design, scenario, K, n, replicates, v_hat, v_hat_se,
// sigma2_hat, sigma2_se, sigma2_analytic, ratio, power, power_se, failures,
// failures_se, lower_bound. Values for arm 0; empty when not applicable.
std::string csv_header();
std::string csv_row(const Scenario& sc, const StudyReport& rep);

std::string text_summary(const Scenario& sc, const StudyReport& rep);
std::string compare_table(const std::vector<Scenario>& scenarios, const std::vector<StudyReport>& reports);

}  // namespace alloclab
