#include "mdpkit/io.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mdpkit {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("double formatting failed");
    return std::string(buf, ptr);
}

std::string model_to_json(const MdpModel& model) {
    json doc;
    doc["gamma"] = model.gamma;
    json states = json::array();
    for (int x = 0; x < model.num_states; ++x) states.push_back("s" + std::to_string(x));
    doc["states"] = states;

    json actions = json::array(), rewards = json::array(), transitions = json::array();
    for (int x = 0; x < model.num_states; ++x) {
        json names = json::array();
        for (int a = 0; a < model.num_actions(x); ++a)
            names.push_back(model.action_names.empty() ? "a" + std::to_string(a)
                                                       : model.action_names[x][a]);
        actions.push_back(names);

        json state_rewards = json::array();
        for (int a = 0; a < model.num_actions(x); ++a) state_rewards.push_back(model.rewards[x](a));
        rewards.push_back(state_rewards);

        json state_rows = json::array();
        for (int a = 0; a < model.num_actions(x); ++a) {
            json row = json::array();
            for (int y = 0; y < model.num_states; ++y) row.push_back(model.transitions[x](a, y));
            state_rows.push_back(row);
        }
        transitions.push_back(state_rows);
    }
    doc["actions"] = actions;
    doc["rewards"] = rewards;
    doc["transitions"] = transitions;
    return doc.dump(2) + "\n";  // keys sort alphabetically: canonical form
}

MdpModel parse_model(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed model document: ") + e.what());
    }
    for (const char* field : {"gamma", "states", "actions", "rewards", "transitions"})
        if (!doc.contains(field))
            throw std::invalid_argument(std::string("model document missing field '") + field +
                                        "'");

    MdpModel model;
    try {
        model.gamma = doc["gamma"].get<double>();
        const auto states = doc["states"];
        model.num_states = static_cast<int>(states.size());
        const int n = model.num_states;
        if (doc["actions"].size() != states.size() || doc["rewards"].size() != states.size() ||
            doc["transitions"].size() != states.size())
            throw std::invalid_argument(
                "actions/rewards/transitions must have one entry per state");
        model.action_names.resize(static_cast<size_t>(n));
        model.rewards.resize(static_cast<size_t>(n));
        model.transitions.resize(static_cast<size_t>(n));
        for (int x = 0; x < n; ++x) {
            const auto& names = doc["actions"][static_cast<size_t>(x)];
            const auto& rewards = doc["rewards"][static_cast<size_t>(x)];
            const auto& rows = doc["transitions"][static_cast<size_t>(x)];
            const int na = static_cast<int>(names.size());
            if (static_cast<int>(rewards.size()) != na || static_cast<int>(rows.size()) != na)
                throw std::invalid_argument("state " + std::to_string(x) +
                                            ": rewards/transitions must match the action list");
            model.rewards[x] = Eigen::VectorXd(na);
            model.transitions[x] = Eigen::MatrixXd::Zero(na, n);
            for (int a = 0; a < na; ++a) {
                model.action_names[x].push_back(names[static_cast<size_t>(a)].get<std::string>());
                model.rewards[x](a) = rewards[static_cast<size_t>(a)].get<double>();
                const auto& row = rows[static_cast<size_t>(a)];
                if (static_cast<int>(row.size()) != n)
                    throw std::invalid_argument("transition row (" + std::to_string(x) + "," +
                                                std::to_string(a) + ") has wrong length");
                for (int y = 0; y < n; ++y)
                    model.transitions[x](a, y) = row[static_cast<size_t>(y)].get<double>();
            }
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed model document: ") + e.what());
    }

    const auto findings = validate_model(model);
    if (!findings.empty()) {
        std::ostringstream os;
        os << "model document failed validation:";
        for (const auto& f : findings) os << "\n  " << f;
        throw std::invalid_argument(os.str());
    }
    return model;
}

MdpModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open model file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_model(buffer.str());
}

void save_model(const MdpModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write model file: " + path);
    out << model_to_json(model);
}

std::vector<TraceRow> trace_rows(const IterationTrace& trace, const std::string& run_id,
                                 bool full_values) {
    std::vector<TraceRow> rows;
    for (size_t i = 0; i < trace.steps.size(); ++i) {
        const TraceStep& step = trace.steps[i];
        TraceRow row;
        row.run = run_id;
        row.k = step.iteration;
        row.policy = encode_policy(step.policy);
        row.changed = !step.switched.empty();
        if (row.changed) {
            row.state = step.switched.front();
            row.action = trace.steps[i + 1].policy[static_cast<size_t>(row.state)];
            row.v_at_state = step.values(row.state);
        }
        if (full_values)
            row.full_values.assign(step.values.data(), step.values.data() + step.values.size());
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<TraceRow> trajectory_rows(const Trajectory& trajectory, const std::string& run_id,
                                      bool full_values) {
    std::vector<TraceRow> rows;
    for (const auto& step : trajectory.steps) {
        TraceRow row;
        row.run = run_id;
        row.k = step.k;
        row.state = step.state;
        row.action = step.action;
        row.policy = encode_policy(step.policy);
        row.changed = step.changed;
        if (step.values) {
            row.v_at_state = (*step.values)(step.state);
            if (full_values)
                row.full_values.assign(step.values->data(),
                                       step.values->data() + step.values->size());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string render_trace(const std::vector<TraceRow>& rows, TraceFormat format) {
    std::ostringstream os;
    const size_t extra = rows.empty() ? 0 : rows.front().full_values.size();
    if (format == TraceFormat::Csv) {
        os << "run,k,state,action,policy,changed,v_at_state";
        for (size_t i = 0; i < extra; ++i) os << ",v" << i;
        os << "\n";
        for (const auto& row : rows) {
            os << row.run << ',' << row.k << ',' << row.state << ',' << row.action << ','
               << row.policy << ',' << (row.changed ? "true" : "false") << ',';
            if (row.v_at_state) os << format_double(*row.v_at_state);
            for (const double v : row.full_values) os << ',' << format_double(v);
            os << "\n";
        }
    } else {
        for (const auto& row : rows) {
            json j;
            j["run"] = row.run;
            j["k"] = row.k;
            j["state"] = row.state;
            j["action"] = row.action;
            j["policy"] = row.policy;
            j["changed"] = row.changed;
            j["v_at_state"] = row.v_at_state ? json(*row.v_at_state) : json(nullptr);
            if (!row.full_values.empty()) j["values"] = row.full_values;
            os << j.dump() << "\n";
        }
    }
    return os.str();
}

void emit_trace(const std::vector<TraceRow>& rows, const std::string& path, TraceFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write trace file: " + path);
    out << render_trace(rows, format);
}

}  // namespace mdpkit
