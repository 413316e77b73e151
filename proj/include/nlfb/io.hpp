#pragma once
// ===== result serialization: CSV time series, JSON summaries =====

#include <optional>
#include <string>
#include <utility>

#include "nlfb/fbsolver.hpp"
#include "nlfb/kernel.hpp"

namespace nlfb {

// Fields are optional so each experiment type emits exactly what it computed.
struct RunSummary {
    std::optional<Outcome> outcome;
    std::optional<double> h_slope;
    std::optional<double> g_slope;
    std::optional<double> lambda_p;
    std::optional<double> h_star;
    std::optional<std::pair<double, double>> mu_star_bracket;
    std::optional<double> c_l;
    std::optional<double> c_star;
    std::optional<double> c_r;
    std::optional<Moment> c_tilde;  // null in JSON when infinite
    std::optional<double> wall_time;
};

std::string outcome_label(Outcome o);
Outcome outcome_from_label(const std::string& label);

// Header t,g,h,h_rate,g_rate,max_u,mass; one row per sample, 17 significant
// digits. Header only for an empty trajectory.
std::string timeseries_csv(const Trajectory& traj);

// Header t,x,u; one row per node per stored snapshot.
std::string snapshots_csv(const Trajectory& traj);

std::string summary_json(const RunSummary& summary);
RunSummary parse_summary_json(const std::string& text);

// Writes summary.json and, when a trajectory is given, timeseries.csv and
// snapshots.csv into dir (created if missing); existing files are replaced.
void write_outputs(const RunSummary& summary, const Trajectory* traj, const std::string& dir);

}  // namespace nlfb
