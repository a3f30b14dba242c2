#include "qswap/schedule_io.hpp"

#include "json_reader.hpp"

namespace qswap {

namespace {

using detail::JsonReader;
using detail::ordered_json;

ordered_json event_json(const BoundaryEvent& e) {
    ordered_json j;
    j["kind"] = to_string(e.kind);
    j["qubit"] = e.qubit;
    j["data"] = e.data_id ? ordered_json(*e.data_id) : ordered_json(nullptr);
    return j;
}

ordered_json events_json(const std::vector<BoundaryEvent>& events) {
    ordered_json arr = ordered_json::array();
    for (const BoundaryEvent& e : events) {
        arr.push_back(event_json(e));
    }
    return arr;
}

std::vector<BoundaryEvent> parse_events(const ordered_json& arr, const std::string& where) {
    if (!arr.is_array()) {
        throw ConfigError(where, "expected an array");
    }
    std::vector<BoundaryEvent> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        JsonReader r(arr[i], where + "/" + std::to_string(i));
        BoundaryEvent e;
        const std::string kind = r.string("kind");
        if (kind != "inject" && kind != "read_reset") {
            throw ConfigError(r.child("kind"), "boundary events are inject or read_reset");
        }
        e.kind = event_kind_from_string(kind);
        e.qubit = r.integer("qubit");
        e.data_id = r.integer_optional("data");
        r.finish();
        out.push_back(e);
    }
    return out;
}

}  // namespace

std::string write_schedule_json(const PulseSchedule& schedule,
                                const std::optional<LineAssignment>& lines) {
    ordered_json doc;
    doc["n_qubits"] = schedule.n_qubits;
    doc["pulse_ns"] = schedule.pulse_ns;
    doc["makespan_ns"] = schedule.makespan_ns();
    if (lines) {
        ordered_json l;
        l["line_count"] = lines->line_count;
        ordered_json q = ordered_json::array();
        for (const auto& line : lines->line_of_qubit) {
            q.push_back(line ? ordered_json(*line) : ordered_json(nullptr));
        }
        l["qubit_lines"] = q;
        doc["lines"] = l;
    } else {
        doc["lines"] = nullptr;
    }
    ordered_json windows = ordered_json::array();
    for (const ScheduleWindow& w : schedule.windows) {
        ordered_json jw;
        jw["start_ns"] = w.start_ns;
        jw["duration_ns"] = w.duration_ns;
        jw["biases_mhz"] = w.biases.biases_mhz;
        jw["events"] = events_json(w.events);
        ordered_json pulses = ordered_json::array();
        for (const PulseEvent& p : w.pulses) {
            ordered_json jp;
            jp["kind"] = to_string(p.kind);
            jp["qubit"] = p.qubit;
            jp["role"] = to_string(p.role);
            jp["op"] = p.op_id;
            jp["partner"] = p.partner;
            pulses.push_back(jp);
        }
        jw["pulses"] = pulses;
        windows.push_back(jw);
    }
    doc["windows"] = windows;
    doc["final_events"] = events_json(schedule.final_events);
    return doc.dump(2) + "\n";
}

ScheduleDocument read_schedule_json(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("/", std::string("not valid JSON: ") + e.what());
    }
    JsonReader r(doc, "");
    ScheduleDocument out;
    PulseSchedule& s = out.schedule;
    s.n_qubits = r.integer("n_qubits");
    if (s.n_qubits < 1) {
        throw ConfigError(r.child("n_qubits"), "must be >= 1");
    }
    s.pulse_ns = r.number("pulse_ns");
    const double makespan = r.number("makespan_ns");

    if (auto lines = r.raw_optional("lines")) {
        JsonReader lr(lines->get(), r.child("lines"));
        LineAssignment la;
        la.line_count = lr.integer("line_count");
        const ordered_json& q = lr.array("qubit_lines");
        for (std::size_t i = 0; i < q.size(); ++i) {
            if (q[i].is_null()) {
                la.line_of_qubit.emplace_back(std::nullopt);
            } else {
                la.line_of_qubit.emplace_back(
                    JsonReader::as_integer(q[i], lr.child("qubit_lines") + "/" + std::to_string(i)));
            }
        }
        lr.finish();
        out.lines = std::move(la);
    }

    const ordered_json& windows = r.array("windows");
    for (std::size_t i = 0; i < windows.size(); ++i) {
        const std::string wp = r.child("windows") + "/" + std::to_string(i);
        JsonReader wr(windows[i], wp);
        ScheduleWindow w;
        w.start_ns = wr.number("start_ns");
        w.duration_ns = wr.number("duration_ns");
        const ordered_json& biases = wr.array("biases_mhz");
        for (std::size_t q = 0; q < biases.size(); ++q) {
            w.biases.biases_mhz.push_back(
                JsonReader::as_number(biases[q], wr.child("biases_mhz") + "/" + std::to_string(q)));
        }
        if (w.biases.size() != static_cast<std::size_t>(s.n_qubits)) {
            throw ConfigError(wr.child("biases_mhz"), "needs one bias per qubit");
        }
        w.events = parse_events(wr.raw("events"), wr.child("events"));
        const ordered_json& pulses = wr.array("pulses");
        for (std::size_t k = 0; k < pulses.size(); ++k) {
            const std::string pp = wr.child("pulses") + "/" + std::to_string(k);
            JsonReader pr(pulses[k], pp);
            PulseEvent p;
            p.start_ns = w.start_ns;
            p.duration_ns = w.duration_ns;
            const std::string kind = pr.string("kind");
            try {
                p.kind = event_kind_from_string(kind);
                p.role = pulse_role_from_string(pr.string("role"));
            } catch (const ScheduleError& e) {
                throw ConfigError(pp, e.what());
            }
            if (p.kind == EventKind::inject || p.kind == EventKind::read_reset) {
                throw ConfigError(pr.child("kind"), "pulses are cnot_pulse, readout_pulse or hold");
            }
            p.qubit = pr.integer("qubit");
            if (p.qubit < 0 || p.qubit >= s.n_qubits) {
                throw ConfigError(pr.child("qubit"), "outside the chain");
            }
            p.op_id = pr.integer("op");
            p.partner = pr.integer("partner");
            pr.finish();
            w.pulses.push_back(p);
        }
        wr.finish();
        s.windows.push_back(std::move(w));
    }
    s.final_events = parse_events(r.raw("final_events"), r.child("final_events"));
    r.finish();

    if (std::abs(makespan - s.makespan_ns()) > 1e-9 * std::max(1.0, makespan)) {
        throw ConfigError(r.child("makespan_ns"), "does not match the windows");
    }
    try {
        check_tiling(s);
    } catch (const ScheduleError& e) {
        throw ConfigError(r.child("windows"), e.what());
    }
    return out;
}

}  // namespace qswap
