#pragma once

#include "mdpkit/online.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mdpkit {

/// Parses a JSON model document and validates the result. Throws
/// std::invalid_argument with field diagnostics on malformed or invalid
/// input.
MdpModel load_model(const std::string& path);
MdpModel parse_model(const std::string& json_text);

/// Canonical serialization (sorted keys, round-trip-exact reals);
/// load(save(m)) reproduces m bit-for-bit.
void save_model(const MdpModel& model, const std::string& path);
std::string model_to_json(const MdpModel& model);

enum class TraceFormat { Csv, JsonLines };

/// Flat tabular record shared by off-line traces and on-line trajectories.
struct TraceRow {
    std::string run;
    int k = 0;
    int state = -1;
    int action = -1;
    std::string policy;  // dash-joined action indices
    bool changed = false;
    std::optional<double> v_at_state;
    std::vector<double> full_values;  // emitted only when requested
};

std::vector<TraceRow> trace_rows(const IterationTrace& trace, const std::string& run_id,
                                 bool full_values = false);
std::vector<TraceRow> trajectory_rows(const Trajectory& trajectory, const std::string& run_id,
                                      bool full_values = false);

/// Header `run,k,state,action,policy,changed,v_at_state` plus v0..v{n-1}
/// when full values are present. Identical inputs emit identical bytes.
void emit_trace(const std::vector<TraceRow>& rows, const std::string& path, TraceFormat format);
std::string render_trace(const std::vector<TraceRow>& rows, TraceFormat format);

/// Shortest decimal form that round-trips the double exactly.
std::string format_double(double v);

}  // namespace mdpkit
