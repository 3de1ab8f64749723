#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "locreq/config.hpp"
#include "locreq/engine.hpp"
#include "locreq/simulate.hpp"
#include "locreq/version.hpp"

namespace locreq {

enum class ReportFormat { json, csv, markdown };

inline ReportFormat report_format_from_name(std::string_view name) {
    if (name == "json") return ReportFormat::json;
    if (name == "csv") return ReportFormat::csv;
    if (name == "markdown") return ReportFormat::markdown;
    fail(Errc::config, "unknown report format '" + std::string(name) + "'");
}

// Derivation result plus the step-C intermediates.
struct DeriveSection {
    DataRequirements req;
    MarginVector gap_margin;    // v * t_g over the dof axes
    MarginVector delay_margin;  // v * t_d over the dof axes
};

// Simulation settings and outcome as reported.
struct SimSection {
    double t_gap_s = 0.0;
    double latency_s = 0.0;          // delay share of the classification offset
    double classify_offset_s = 0.0;  // measurement-to-classification window
    MarginVector budgets;            // noise was calibrated to these
    NoiseModel noise;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    SimReport sim;
};

// Everything a command run produces. Rendering the same report twice
// yields identical bytes: numbers are fixed at six significant digits and
// object keys are sorted.
struct Report {
    std::string command;
    std::string config_digest;
    json config_echo;
    std::vector<std::string> warnings;

    std::optional<DeriveSection> derive;
    std::vector<IlsAssessment> check;
    std::optional<TradeoffTable> tradeoff;
    std::optional<SimSection> simulation;
};

namespace repdetail {

// Fixed float formatting contract: six significant digits.
inline std::string fmt6(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// JSON numbers are pre-rounded to the formatting contract; non-finite
// values (unbounded margins) render as null.
inline json num(double v) {
    if (!std::isfinite(v)) return json();
    return std::strtod(fmt6(v).c_str(), nullptr);
}

inline json margin_json(const MarginVector& m) {
    json j = json::object();
    for (Axis a : m.axes().axes()) j[std::string(axis_name(a))] = num(m[a]);
    return j;
}

inline json verdict_json(const Verdict& v) {
    json j;
    j["feasible"] = v.feasible;
    json slack = json::object();
    for (Axis a : v.axes.axes()) slack[std::string(axis_name(a))] = num(v.slack_at(a));
    j["slack"] = slack;
    j["binding_axis"] = std::string(axis_name(v.binding_axis));
    return j;
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// Column header for a per-axis budget: Px_m ... Pyaw_rad.
inline std::string budget_header(Axis a) {
    return std::string("P") + std::string(axis_name(a)) + (axis_is_angular(a) ? "_rad" : "_m");
}

}  // namespace repdetail

inline json report_to_json(const Report& report) {
    using repdetail::margin_json;
    using repdetail::num;
    using repdetail::verdict_json;

    json root;
    root["command"] = report.command;
    root["config_digest"] = report.config_digest;
    root["config"] = report.config_echo;
    json tool;
    tool["name"] = kToolName;
    tool["version"] = kToolVersion;
    root["tool"] = tool;
    root["warnings"] = report.warnings;

    if (report.derive) {
        const DataRequirements& d = report.derive->req;
        json j;
        j["requirement_margin"] = margin_json(d.requirement_margin);
        j["time_gap_s"] = num(d.time_gap_s);
        j["latency_s"] = num(d.latency_s);
        j["time_gap_margin"] = margin_json(report.derive->gap_margin);
        j["time_delay_margin"] = margin_json(report.derive->delay_margin);
        j["confidence_retention"] = num(d.confidence.retention());
        j["basis"] = std::string(basis_name(d.basis));
        j["accuracy_budget_at_interest_frame"] = margin_json(d.accuracy_budget_at_interest_frame);
        if (d.accuracy_budget_at_device_frame)
            j["accuracy_budget_at_device_frame"] = margin_json(*d.accuracy_budget_at_device_frame);
        root["requirements"] = j;
    }

    if (!report.check.empty()) {
        json arr = json::array();
        for (const IlsAssessment& a : report.check) {
            json j;
            j["ils"] = a.ils_name;
            j["requirement_margin"] = margin_json(a.requirement);
            j["static_uncertainty"] = margin_json(a.static_unc);
            j["time_gap_margin"] = margin_json(a.gap_margin);
            j["time_delay_margin"] = margin_json(a.delay_margin);
            j["uncertainty_space"] = margin_json(a.uncertainty);
            j["verdict"] = verdict_json(a.verdict);
            arr.push_back(j);
        }
        root["suitability"] = arr;
    }

    if (report.tradeoff) {
        const TradeoffTable& t = *report.tradeoff;
        json cols = json::array();
        for (const TradeoffColumn& col : t.columns) {
            json j;
            j["t_g_s"] = num(col.t_gap_s);
            json budgets = json::object();
            json infeasible = json::array();
            for (Axis a : t.axes.axes()) {
                const auto& cell = col.budget[axis_index(a)];
                if (cell)
                    budgets[std::string(axis_name(a))] = num(*cell);
                else
                    infeasible.push_back(std::string(axis_name(a)));
            }
            j["budget"] = budgets;
            j["infeasible_axes"] = infeasible;
            cols.push_back(j);
        }
        json j;
        j["columns"] = cols;
        root["tradeoff"] = j;
    }

    if (report.simulation) {
        const SimSection& s = *report.simulation;
        json j;
        j["t_gap_s"] = num(s.t_gap_s);
        j["latency_s"] = num(s.latency_s);
        j["classify_offset_s"] = num(s.classify_offset_s);
        j["budgets"] = margin_json(s.budgets);
        json noise;
        for (Axis a : kAxisOrder) noise[std::string(axis_name(a))] = num(s.noise.at(a));
        j["noise_sigma"] = noise;
        j["trials"] = s.trials;
        j["seed"] = s.seed;
        j["updates_total"] = s.sim.updates_total;
        j["updates_classified"] = s.sim.updates_classified;
        j["confidence_target"] = num(s.sim.confidence_target);
        json rates = json::object();
        json ses = json::object();
        json bounds = json::object();
        for (Axis a : s.sim.axes.axes()) {
            rates[std::string(axis_name(a))] = num(s.sim.rate_at(a));
            ses[std::string(axis_name(a))] = num(s.sim.se_at(a));
            bounds[std::string(axis_name(a))] = num(s.sim.bound_at(a));
        }
        j["false_outside_rate"] = rates;
        j["standard_error"] = ses;
        j["rate_bound"] = bounds;
        j["false_outside_joint"] = num(s.sim.false_outside_joint);
        j["union_bound"] = num(s.sim.union_bound);
        j["pass"] = s.sim.pass;
        root["simulation"] = j;
    }

    return root;
}

namespace repdetail {

inline std::string render_csv(const Report& report) {
    std::string out;
    for (const std::string& w : report.warnings) out += "# warning: " + w + "\n";

    if (report.derive) {
        const DataRequirements& d = report.derive->req;
        out += "# data_requirements (t_g_s=" + fmt6(d.time_gap_s) +
               ",t_d_s=" + fmt6(d.latency_s) + ")\n";
        out += "axis,requirement_margin,time_gap_margin,time_delay_margin,"
               "budget_interest_frame,budget_device_frame\n";
        for (Axis a : d.requirement_margin.axes().axes()) {
            out += std::string(axis_name(a)) + "," + fmt6(d.requirement_margin[a]) + "," +
                   fmt6(report.derive->gap_margin[a]) + "," +
                   fmt6(report.derive->delay_margin[a]) + "," +
                   fmt6(d.accuracy_budget_at_interest_frame[a]) + ",";
            if (d.accuracy_budget_at_device_frame)
                out += fmt6((*d.accuracy_budget_at_device_frame)[a]);
            out += "\n";
        }
    }

    if (!report.check.empty()) {
        out += "# suitability\n";
        out += "ils,axis,requirement_margin,uncertainty,slack,feasible,binding_axis\n";
        for (const IlsAssessment& a : report.check) {
            for (Axis ax : a.requirement.axes().axes()) {
                out += csv_escape(a.ils_name) + "," + std::string(axis_name(ax)) + "," +
                       fmt6(a.requirement[ax]) + "," + fmt6(a.uncertainty[ax]) + "," +
                       fmt6(a.verdict.slack_at(ax)) + "," +
                       (a.verdict.feasible ? "true" : "false") + "," +
                       std::string(axis_name(a.verdict.binding_axis)) + "\n";
            }
        }
    }

    if (report.tradeoff) {
        const TradeoffTable& t = *report.tradeoff;
        out += "# tradeoff\n";
        out += "t_g_s";
        for (Axis a : t.axes.axes()) out += "," + budget_header(a);
        out += "\n";
        for (const TradeoffColumn& col : t.columns) {
            out += fmt6(col.t_gap_s);
            for (Axis a : t.axes.axes()) {
                const auto& cell = col.budget[axis_index(a)];
                out += ",";
                out += cell ? fmt6(*cell) : std::string("infeasible");
            }
            out += "\n";
        }
    }

    if (report.simulation) {
        const SimSection& s = *report.simulation;
        out += "# simulation (trials=" + std::to_string(s.trials) +
               ",seed=" + std::to_string(s.seed) +
               ",updates_classified=" + std::to_string(s.sim.updates_classified) +
               ",pass=" + (s.sim.pass ? "true" : "false") + ")\n";
        out += "axis,budget,noise_sigma,false_outside_rate,rate_bound,standard_error\n";
        for (Axis a : s.sim.axes.axes()) {
            out += std::string(axis_name(a)) + "," + fmt6(s.budgets[a]) + "," +
                   fmt6(s.noise.at(a)) + "," + fmt6(s.sim.rate_at(a)) + "," +
                   fmt6(s.sim.bound_at(a)) + "," + fmt6(s.sim.se_at(a)) + "\n";
        }
    }

    return out;
}

inline std::string render_markdown(const Report& report) {
    std::string out = "# " + std::string(kToolName) + " report: " + report.command + "\n\n";
    out += "- tool: " + std::string(kToolName) + " " + std::string(kToolVersion) + "\n";
    out += "- config digest: `" + report.config_digest + "`\n";

    if (report.derive) {
        const DataRequirements& d = report.derive->req;
        out += "\n## Data requirements\n\n";
        out += "- time gap: " + fmt6(d.time_gap_s) + " s, latency: " + fmt6(d.latency_s) +
               " s, confidence retention: " + fmt6(d.confidence.retention()) + "\n\n";
        out += "| axis | requirement margin | TG | TD | budget (interest frame) |";
        const bool device = d.accuracy_budget_at_device_frame.has_value();
        if (device) out += " budget (device frame) |";
        out += "\n|---|---|---|---|---|";
        if (device) out += "---|";
        out += "\n";
        for (Axis a : d.requirement_margin.axes().axes()) {
            out += "| " + std::string(axis_name(a)) + " | " + fmt6(d.requirement_margin[a]) +
                   " | " + fmt6(report.derive->gap_margin[a]) + " | " +
                   fmt6(report.derive->delay_margin[a]) + " | " +
                   fmt6(d.accuracy_budget_at_interest_frame[a]) + " |";
            if (device) out += " " + fmt6((*d.accuracy_budget_at_device_frame)[a]) + " |";
            out += "\n";
        }
    }

    if (!report.check.empty()) {
        out += "\n## Suitability\n";
        for (const IlsAssessment& a : report.check) {
            out += "\n### " + a.ils_name + " — " +
                   (a.verdict.feasible ? "feasible" : "infeasible") +
                   " (binding axis: " + std::string(axis_name(a.verdict.binding_axis)) + ")\n\n";
            out += "| axis | R | U_static | TG | TD | U | slack |\n";
            out += "|---|---|---|---|---|---|---|\n";
            for (Axis ax : a.requirement.axes().axes()) {
                out += "| " + std::string(axis_name(ax)) + " | " + fmt6(a.requirement[ax]) +
                       " | " + fmt6(a.static_unc[ax]) + " | " + fmt6(a.gap_margin[ax]) + " | " +
                       fmt6(a.delay_margin[ax]) + " | " + fmt6(a.uncertainty[ax]) + " | " +
                       fmt6(a.verdict.slack_at(ax)) + " |\n";
            }
        }
    }

    if (report.tradeoff) {
        const TradeoffTable& t = *report.tradeoff;
        out += "\n## Accuracy budget vs. time gap\n\n";
        out += "| |";
        for (const TradeoffColumn& col : t.columns) out += " " + fmt6(col.t_gap_s) + " s |";
        out += "\n|---|";
        for (std::size_t i = 0; i < t.columns.size(); ++i) out += "---|";
        out += "\n";
        for (Axis a : t.axes.axes()) {
            out += "| " + budget_header(a) + " |";
            for (const TradeoffColumn& col : t.columns) {
                const auto& cell = col.budget[axis_index(a)];
                out += " " + (cell ? fmt6(*cell) : std::string("infeasible")) + " |";
            }
            out += "\n";
        }
    }

    if (report.simulation) {
        const SimSection& s = *report.simulation;
        out += "\n## Simulation\n\n";
        out += "- trials: " + std::to_string(s.trials) + ", seed: " + std::to_string(s.seed) +
               ", updates classified: " + std::to_string(s.sim.updates_classified) + "\n";
        out += "- confidence target: " + fmt6(s.sim.confidence_target) +
               ", classification offset: " + fmt6(s.classify_offset_s) + " s\n";
        out += std::string("- outcome: **") + (s.sim.pass ? "pass" : "fail") + "**\n\n";
        out += "| axis | budget | sigma | false-outside rate | bound |\n";
        out += "|---|---|---|---|---|\n";
        for (Axis a : s.sim.axes.axes()) {
            out += "| " + std::string(axis_name(a)) + " | " + fmt6(s.budgets[a]) + " | " +
                   fmt6(s.noise.at(a)) + " | " + fmt6(s.sim.rate_at(a)) + " | " +
                   fmt6(s.sim.bound_at(a)) + " |\n";
        }
    }

    if (!report.warnings.empty()) {
        out += "\n## Warnings\n\n";
        for (const std::string& w : report.warnings) out += "- " + w + "\n";
    }

    return out;
}

}  // namespace repdetail

inline std::string render_report(const Report& report, ReportFormat format) {
    switch (format) {
        case ReportFormat::json: return report_to_json(report).dump(2) + "\n";
        case ReportFormat::csv: return repdetail::render_csv(report);
        case ReportFormat::markdown: return repdetail::render_markdown(report);
    }
    fail(Errc::config, "unknown report format");
}

}  // namespace locreq
