#include "alloclab/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace alloclab {

namespace {

using nlohmann::json;

std::string fmt(double x, int digits = 4) {
    if (std::isnan(x)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

// Round-trip precision for CSV cells.
std::string cell(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json estimate_json(const Estimate& e) { return {{"value", e.value}, {"se", e.se}}; }

std::optional<TargetKind> reference_target(const DesignSpec& d) {
    if (d.kind == DesignKind::Dbcd || d.kind == DesignKind::Rbcd) return d.target;
    return d.implied_target();
}

}  // namespace

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

json summary_json(const AsymptoticSummary& s) {
    json out = {{"v", s.v},
                {"regime", s.regime == Regime::Normal ? "normal" : "degenerate_or_unknown"}};
    if (s.has_variance()) {
        out["sigma2"] = s.scalar();
        out["sigma2_matrix"] = matrix_json(s.sigma2);
    } else {
        out["sigma2"] = nullptr;
    }
    if (!s.note.empty()) out["note"] = s.note;
    return out;
}

json asympt_json(const Scenario& sc) {
    const DesignSpec& d = sc.sim.design;
    const std::vector<double>& p = sc.sim.p;
    json out = {{"scenario", sc.name}, {"design", design_name(d.kind)}, {"p", p}};
    if (d.kind == DesignKind::Dbcd) out["gamma"] = d.dbcd.gamma;
    if (auto ref = analytic_reference(d, p)) out["asymptotic"] = summary_json(*ref);
    if (auto lb = design_lower_bound(d, p)) {
        out["lower_bound"] = (*lb)(0, 0);
        out["lower_bound_matrix"] = matrix_json(*lb);
    }
    if (auto target = reference_target(d); target && (*target != TargetKind::Rsihr || p.size() == 2)) {
        json t2 = {{"target", target_name(*target)}};
        t2["seu"] = variability_comparison(VariabilityModel::Seu, *target, p)(0, 0);
        t2["gdl"] = variability_comparison(VariabilityModel::Gdl, *target, p)(0, 0);
        t2["dbcd"] = variability_comparison(VariabilityModel::Dbcd, *target, p, d.dbcd.gamma)(0, 0);
        t2["dbcd_gamma"] = d.dbcd.gamma;
        out["model_comparison"] = t2;
    }
    if (d.kind == DesignKind::Dbcd && p.size() == 2) {
        json rows = json::array();
        for (const auto& w : worked_examples(p, d.dbcd.gamma))
            rows.push_back({{"target", target_name(w.target)},
                            {"closed_form", w.closed_form},
                            {"general", w.general},
                            {"abs_diff", w.abs_diff}});
        out["dbcd_closed_forms"] = rows;
    }
    return out;
}

std::string asympt_text(const Scenario& sc) {
    const json j = asympt_json(sc);
    std::ostringstream os;
    os << "design " << j["design"].get<std::string>() << "  p =";
    for (double x : sc.sim.p) os << ' ' << fmt(x, 3);
    os << '\n';
    if (j.contains("asymptotic")) {
        const json& a = j["asymptotic"];
        os << "  v          ";
        for (double x : a["v"].get<std::vector<double>>()) os << ' ' << fmt(x);
        os << '\n';
        if (a["sigma2"].is_null())
            os << "  sigma2      " << a.value("note", std::string("unavailable")) << '\n';
        else
            os << "  sigma2      " << fmt(a["sigma2"].get<double>()) << '\n';
    }
    if (j.contains("lower_bound")) os << "  lower bound " << fmt(j["lower_bound"].get<double>()) << '\n';
    if (j.contains("model_comparison")) {
        const json& t = j["model_comparison"];
        os << "  target " << t["target"].get<std::string>() << ": seu " << fmt(t["seu"].get<double>())
           << "  gdl " << fmt(t["gdl"].get<double>()) << "  dbcd(gamma=" << fmt(t["dbcd_gamma"].get<double>(), 2)
           << ") " << fmt(t["dbcd"].get<double>()) << '\n';
    }
    return os.str();
}

json report_json(const Scenario& sc, const StudyReport& rep) {
    const SimConfig& cfg = rep.config;
    json out;
    out["scenario"] = sc.name;
    out["config"] = sc.source;
    out["seed"] = cfg.seed;
    out["design"] = design_name(cfg.design.kind);
    out["p"] = cfg.p;
    out["n"] = cfg.n;
    out["replicates"] = cfg.replicates;
    json props = json::array();
    for (const auto& e : rep.mean_proportions) props.push_back(estimate_json(e));
    out["mean_proportions"] = props;
    out["scaled_variance"] = matrix_json(rep.scaled_variance);
    out["sigma2_hat"] = {{"value", rep.sigma2_hat}, {"se", rep.sigma2_se}};
    out["analytic"] = rep.analytic ? summary_json(*rep.analytic) : json(nullptr);
    out["lower_bound"] = rep.lower_bound ? json((*rep.lower_bound)(0, 0)) : json(nullptr);
    out["ratio"] = rep.ratio ? json(*rep.ratio) : json(nullptr);
    out["test_level"] = cfg.test_level;
    out["power"] = rep.power ? estimate_json(*rep.power) : json(nullptr);
    out["expected_failures"] = estimate_json(rep.failures);
    if (rep.delay) {
        out["delay"] = {{"entry_rate", cfg.delay->entry_rate},
                        {"response_rates", cfg.delay->response_rates},
                        {"terminal_pending", estimate_json(rep.delay->terminal_pending)},
                        {"scaled_success_gap", estimate_json(rep.delay->scaled_gap)}};
    } else {
        out["delay"] = nullptr;
    }
    return out;
}

std::string csv_header() {
    return "design,scenario,K,n,replicates,v_hat,v_hat_se,sigma2_hat,sigma2_se,sigma2_analytic,ratio,"
           "power,power_se,failures,failures_se,lower_bound";
}

std::string csv_row(const Scenario& sc, const StudyReport& rep) {
    const SimConfig& cfg = rep.config;
    std::string name = sc.name;
    for (char& c : name)
        if (c == ',' || c == '"' || c == '\n') c = '_';
    std::ostringstream os;
    os << design_name(cfg.design.kind) << ',' << name << ',' << cfg.design.arms << ',' << cfg.n << ','
       << cfg.replicates << ',' << cell(rep.mean_proportions[0].value) << ','
       << cell(rep.mean_proportions[0].se) << ',' << cell(rep.sigma2_hat) << ',' << cell(rep.sigma2_se) << ',';
    if (rep.analytic && rep.analytic->has_variance()) os << cell(rep.analytic->scalar());
    os << ',';
    if (rep.ratio) os << cell(*rep.ratio);
    os << ',';
    if (rep.power) os << cell(rep.power->value) << ',' << cell(rep.power->se);
    else os << ',';
    os << ',' << cell(rep.failures.value) << ',' << cell(rep.failures.se) << ',';
    if (rep.lower_bound) os << cell((*rep.lower_bound)(0, 0));
    return os.str();
}

std::string text_summary(const Scenario& sc, const StudyReport& rep) {
    const SimConfig& cfg = rep.config;
    std::ostringstream os;
    os << sc.name << ": " << design_name(cfg.design.kind) << ", K=" << cfg.design.arms << ", n=" << cfg.n
       << ", R=" << cfg.replicates << ", seed=" << cfg.seed << '\n';
    os << "  N/n        ";
    for (const auto& e : rep.mean_proportions) os << ' ' << fmt(e.value) << " (" << fmt(e.se, 4) << ')';
    os << '\n';
    if (rep.analytic) {
        os << "  v          ";
        for (double x : rep.analytic->v) os << ' ' << fmt(x);
        os << '\n';
    }
    os << "  sigma2 hat  " << fmt(rep.sigma2_hat) << " (" << fmt(rep.sigma2_se) << ")";
    if (rep.analytic && rep.analytic->has_variance()) {
        os << "   analytic " << fmt(rep.analytic->scalar());
        if (rep.ratio) os << "   ratio " << fmt(*rep.ratio, 3);
    }
    else if (rep.analytic) {
        os << "   analytic: " << rep.analytic->note;
    }
    os << '\n';
    if (rep.lower_bound) os << "  lower bound " << fmt((*rep.lower_bound)(0, 0)) << '\n';
    if (rep.power)
        os << "  power       " << fmt(rep.power->value) << " (" << fmt(rep.power->se) << ") at level "
           << fmt(cfg.test_level, 3) << '\n';
    os << "  failures    " << fmt(rep.failures.value, 2) << " (" << fmt(rep.failures.se, 2) << ")\n";
    if (rep.delay)
        os << "  delay       pending at end " << fmt(rep.delay->terminal_pending.value, 3)
           << ", |S - S_obs|/sqrt(n) " << fmt(rep.delay->scaled_gap.value) << '\n';
    return os.str();
}

std::string compare_table(const std::vector<Scenario>& scenarios, const std::vector<StudyReport>& reports) {
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof line, "%-16s %8s %10s %10s %10s %8s %10s\n", "design", "v_hat", "sigma2_hat",
                  "se", "analytic", "power", "failures");
    os << line;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const StudyReport& r = reports[i];
        const std::string analytic =
            r.analytic && r.analytic->has_variance() ? fmt(r.analytic->scalar()) : std::string("-");
        const std::string power = r.power ? fmt(r.power->value, 3) : std::string("-");
        std::snprintf(line, sizeof line, "%-16s %8s %10s %10s %10s %8s %10s\n", scenarios[i].name.c_str(),
                      fmt(r.mean_proportions[0].value).c_str(), fmt(r.sigma2_hat).c_str(),
                      fmt(r.sigma2_se).c_str(), analytic.c_str(), power.c_str(),
                      fmt(r.failures.value, 2).c_str());
        os << line;
    }
    return os.str();
}

}  // namespace alloclab
