#include "qswap/pulse_scheduler.hpp"

#include "qswap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

namespace qswap {

namespace {

constexpr double kGridTolerance = 1e-9;

void check_qubit_range(int qubit, int n_qubits, const char* what) {
    if (qubit < 0 || qubit >= n_qubits) {
        throw ScheduleError(std::string(what) + ": qubit " + std::to_string(qubit) +
                            " outside a chain of " + std::to_string(n_qubits));
    }
}

double pulse_bias(const ChainSpec& spec, EventKind kind) {
    switch (kind) {
        case EventKind::cnot_pulse: return 0.0;
        case EventKind::readout_pulse: return spec.xi_mhz;
        case EventKind::hold: return spec.eps_high_mhz;
        default: throw ScheduleError("pulse_bias: not a pulse kind");
    }
}

// Fills in data ids of reads on the last qubit from a symbolic replay.
void annotate_output_reads(PulseSchedule& schedule) {
    const ReplayTrace trace = replay_occupancy(schedule, empty_occupancy(schedule.n_qubits));
    std::size_t next = 0;
    auto visit = [&](std::vector<BoundaryEvent>& events) {
        for (BoundaryEvent& e : events) {
            if (e.kind != EventKind::read_reset) {
                continue;
            }
            const ReadRecord& rec = trace.reads.at(next++);
            if (e.qubit == schedule.n_qubits - 1) {
                e.data_id = rec.value.single();
            }
        }
    };
    for (ScheduleWindow& w : schedule.windows) {
        visit(w.events);
    }
    visit(schedule.final_events);
}

}  // namespace

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::cnot_pulse: return "cnot_pulse";
        case EventKind::readout_pulse: return "readout_pulse";
        case EventKind::hold: return "hold";
        case EventKind::inject: return "inject";
        case EventKind::read_reset: return "read_reset";
    }
    return "hold";
}

std::string_view to_string(PulseRole role) {
    switch (role) {
        case PulseRole::none: return "none";
        case PulseRole::swap: return "swap";
        case PulseRole::copy: return "copy";
        case PulseRole::readout: return "readout";
    }
    return "none";
}

EventKind event_kind_from_string(std::string_view name) {
    for (EventKind k : {EventKind::cnot_pulse, EventKind::readout_pulse, EventKind::hold,
                        EventKind::inject, EventKind::read_reset}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw ScheduleError("unknown event kind '" + std::string(name) + "'");
}

PulseRole pulse_role_from_string(std::string_view name) {
    for (PulseRole r : {PulseRole::none, PulseRole::swap, PulseRole::copy, PulseRole::readout}) {
        if (to_string(r) == name) {
            return r;
        }
    }
    throw ScheduleError("unknown pulse role '" + std::string(name) + "'");
}

std::string_view to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::sacrificial_not_empty: return "sacrificial_not_empty";
        case ViolationKind::copy_precondition: return "copy_precondition";
        case ViolationKind::readout_target_not_empty: return "readout_target_not_empty";
        case ViolationKind::inject_not_empty: return "inject_not_empty";
        case ViolationKind::adjacent_targets: return "adjacent_targets";
        case ViolationKind::illegal_pulse: return "illegal_pulse";
        case ViolationKind::missing_data_id: return "missing_data_id";
    }
    return "illegal_pulse";
}

double PulseSchedule::makespan_ns() const {
    if (windows.empty()) {
        return 0.0;
    }
    return windows.back().start_ns + windows.back().duration_ns;
}

int PulseSchedule::pulse_count() const {
    int count = 0;
    for (const ScheduleWindow& w : windows) {
        count += static_cast<int>(w.pulses.size());
    }
    return count;
}

int LineAssignment::lines_used() const {
    std::set<int> used;
    for (const auto& line : line_of_qubit) {
        if (line) {
            used.insert(*line);
        }
    }
    return static_cast<int>(used.size());
}

void check_tiling(const PulseSchedule& schedule) {
    double t = 0.0;
    for (std::size_t w = 0; w < schedule.windows.size(); ++w) {
        const ScheduleWindow& win = schedule.windows[w];
        if (!(win.duration_ns > 0.0)) {
            throw ScheduleError("window " + std::to_string(w) + " has non-positive duration");
        }
        if (std::abs(win.start_ns - t) > kGridTolerance * std::max(1.0, t)) {
            throw ScheduleError("window " + std::to_string(w) + " does not start where the previous ended");
        }
        if (win.biases.size() != static_cast<std::size_t>(schedule.n_qubits)) {
            throw ScheduleError("window " + std::to_string(w) + " has the wrong number of biases");
        }
        std::set<int> pulsed;
        for (const PulseEvent& p : win.pulses) {
            if (!pulsed.insert(p.qubit).second) {
                throw ScheduleError("window " + std::to_string(w) + " pulses qubit " +
                                    std::to_string(p.qubit) + " twice");
            }
        }
        t = win.start_ns + win.duration_ns;
    }
}

std::vector<PulseEvent> swap_pulses(const ChainSpec& spec, int left, int right, double pulse_ns,
                                    double start_ns, int op_id) {
    check_qubit_range(left, spec.n_qubits, "swap_pulses");
    check_qubit_range(right, spec.n_qubits, "swap_pulses");
    if (std::abs(left - right) != 1) {
        throw ScheduleError("swap_pulses: qubits " + std::to_string(left) + " and " +
                            std::to_string(right) + " are not adjacent");
    }
    if (!(pulse_ns > 0.0)) {
        throw ScheduleError("swap_pulses: pulse width must be > 0");
    }
    std::vector<PulseEvent> out;
    const int targets[3] = {left, right, left};
    for (int k = 0; k < 3; ++k) {
        const int t = targets[k];
        const int other = t == left ? right : left;
        out.push_back(PulseEvent{start_ns + k * pulse_ns, pulse_ns,
                                 spec.is_end(t) ? EventKind::readout_pulse : EventKind::cnot_pulse,
                                 t, PulseRole::swap, op_id, other});
    }
    return out;
}

PulseSchedule assemble_schedule(const ChainSpec& spec, double pulse_ns, int n_windows,
                                std::span<const PulseEvent> pulses,
                                std::vector<std::vector<BoundaryEvent>> events,
                                std::vector<BoundaryEvent> final_events) {
    spec.validate();
    if (!(pulse_ns > 0.0)) {
        throw ScheduleError("assemble_schedule: pulse width must be > 0");
    }
    if (n_windows < 0 || events.size() > static_cast<std::size_t>(n_windows)) {
        throw ScheduleError("assemble_schedule: more event slots than windows");
    }
    PulseSchedule s;
    s.n_qubits = spec.n_qubits;
    s.pulse_ns = pulse_ns;
    s.windows.resize(static_cast<std::size_t>(n_windows));
    for (int w = 0; w < n_windows; ++w) {
        ScheduleWindow& win = s.windows[static_cast<std::size_t>(w)];
        win.start_ns = w * pulse_ns;
        win.duration_ns = pulse_ns;
        win.biases = BiasProfile::uniform(spec.n_qubits, spec.eps_high_mhz);
        if (static_cast<std::size_t>(w) < events.size()) {
            win.events = std::move(events[static_cast<std::size_t>(w)]);
        }
    }
    for (const PulseEvent& p : pulses) {
        check_qubit_range(p.qubit, spec.n_qubits, "assemble_schedule");
        const double slot = p.start_ns / pulse_ns;
        const double w = std::round(slot);
        if (std::abs(slot - w) > kGridTolerance || std::abs(p.duration_ns - pulse_ns) > kGridTolerance ||
            w < 0 || w >= n_windows) {
            throw ScheduleError("assemble_schedule: pulse on qubit " + std::to_string(p.qubit) +
                                " does not fit the window grid");
        }
        ScheduleWindow& win = s.windows[static_cast<std::size_t>(w)];
        PulseEvent snapped = p;
        snapped.start_ns = win.start_ns;
        snapped.duration_ns = win.duration_ns;
        win.pulses.push_back(snapped);
        win.biases.biases_mhz[static_cast<std::size_t>(p.qubit)] = pulse_bias(spec, p.kind);
    }
    for (ScheduleWindow& win : s.windows) {
        std::sort(win.pulses.begin(), win.pulses.end(),
                  [](const PulseEvent& a, const PulseEvent& b) { return a.qubit < b.qubit; });
        for (BoundaryEvent& e : win.events) {
            check_qubit_range(e.qubit, spec.n_qubits, "assemble_schedule");
        }
    }
    s.final_events = std::move(final_events);
    check_tiling(s);
    return s;
}

ChannelPlan quantum_channel_schedule(const ChainSpec& spec, int n_states, double pulse_ns,
                                     const QuantumScheduleOptions& options) {
    spec.validate();
    const int length = spec.n_qubits;
    if (length % 2 == 0 && !options.allow_even_length) {
        throw ScheduleError("quantum channel needs an odd number of qubits (got " +
                            std::to_string(length) + ")");
    }
    if (length < (options.allow_even_length ? 4 : 5)) {
        throw ScheduleError("quantum channel needs at least 5 qubits (got " +
                            std::to_string(length) + ")");
    }
    if (n_states < 1) {
        throw ScheduleError("quantum channel needs at least one state");
    }
    const int macro_steps = 3 * (n_states - 1) + (length - 1);
    const int n_windows = 3 * macro_steps;
    const int arrival_class = (length - 2) % 3;

    std::vector<PulseEvent> pulses;
    std::vector<std::vector<BoundaryEvent>> events(static_cast<std::size_t>(n_windows));
    std::vector<BoundaryEvent> final_events;
    int op_id = 0;
    for (int k = 0; k < macro_steps; ++k) {
        const int cls = k % 3;
        const double start = 3.0 * k * pulse_ns;
        for (int p = cls; p + 1 < length; p += 3) {
            auto frag = swap_pulses(spec, p, p + 1, pulse_ns, start, op_id++);
            pulses.insert(pulses.end(), frag.begin(), frag.end());
        }
        if (cls == arrival_class && k >= length - 2) {
            const BoundaryEvent read{EventKind::read_reset, length - 1, std::nullopt};
            if (k + 1 < macro_steps) {
                events[static_cast<std::size_t>(3 * (k + 1))].push_back(read);
            } else {
                final_events.push_back(read);
            }
        }
    }
    for (int j = 0; j < n_states; ++j) {
        events[static_cast<std::size_t>(9 * j)].push_back(BoundaryEvent{EventKind::inject, 0, j});
    }

    ChannelPlan plan;
    plan.schedule = assemble_schedule(spec, pulse_ns, n_windows, pulses, std::move(events),
                                      std::move(final_events));
    annotate_output_reads(plan.schedule);

    const bool eight = options.line_scheme == LineScheme::eight_line;
    const int period = eight ? 6 : 3;
    plan.lines.line_count = period + 2;
    plan.lines.line_of_qubit.resize(static_cast<std::size_t>(length));
    for (int q = 0; q < length; ++q) {
        if (q == 0) {
            plan.lines.line_of_qubit[0] = period;
        } else if (q == length - 1) {
            plan.lines.line_of_qubit[static_cast<std::size_t>(q)] = period + 1;
        } else {
            plan.lines.line_of_qubit[static_cast<std::size_t>(q)] = q % period;
        }
    }
    return plan;
}

ChannelPlan classical_channel_schedule(const ChainSpec& spec, int n_bits, double pulse_ns) {
    spec.validate();
    const int length = spec.n_qubits;
    if (length % 2 != 0 || length < 4) {
        throw ScheduleError("classical channel needs an even number (>= 4) of qubits (got " +
                            std::to_string(length) + ")");
    }
    if (n_bits < 1) {
        throw ScheduleError("classical channel needs at least one bit");
    }
    const int half = length / 2;
    const int sequences = n_bits + half - 1;
    const int n_windows = 2 * sequences;
    const int out = length - 1;

    std::vector<PulseEvent> pulses;
    std::vector<std::vector<BoundaryEvent>> events(static_cast<std::size_t>(n_windows));
    std::vector<BoundaryEvent> final_events;
    events[0].push_back(BoundaryEvent{EventKind::inject, 0, 0});
    for (int s = 0; s < sequences; ++s) {
        const double phi1 = 2.0 * s * pulse_ns;
        const double phi2 = phi1 + pulse_ns;
        for (int q = 1; q < out; q += 2) {
            pulses.push_back(PulseEvent{phi1, pulse_ns, EventKind::cnot_pulse, q, PulseRole::copy});
        }
        pulses.push_back(PulseEvent{phi1, pulse_ns, EventKind::readout_pulse, out, PulseRole::readout});
        for (int q = 2; q < out; q += 2) {
            pulses.push_back(PulseEvent{phi2, pulse_ns, EventKind::cnot_pulse, q, PulseRole::copy});
        }
        const int next_bit = s + 1;
        if (next_bit < n_bits) {
            auto& slot = events[static_cast<std::size_t>(2 * s + 1)];
            slot.push_back(BoundaryEvent{EventKind::read_reset, 0, std::nullopt});
            slot.push_back(BoundaryEvent{EventKind::inject, 0, next_bit});
        }
        const BoundaryEvent read{EventKind::read_reset, out, std::nullopt};
        if (s + 1 < sequences) {
            events[static_cast<std::size_t>(2 * (s + 1))].push_back(read);
        } else {
            final_events.push_back(read);
        }
    }

    ChannelPlan plan;
    plan.schedule = assemble_schedule(spec, pulse_ns, n_windows, pulses, std::move(events),
                                      std::move(final_events));
    annotate_output_reads(plan.schedule);
    plan.lines.line_count = 3;
    plan.lines.line_of_qubit.resize(static_cast<std::size_t>(length));
    for (int q = 1; q < out; ++q) {
        plan.lines.line_of_qubit[static_cast<std::size_t>(q)] = q % 2 == 1 ? 0 : 1;
    }
    plan.lines.line_of_qubit[static_cast<std::size_t>(out)] = 2;
    return plan;
}

SymbolSet SymbolSet::operator^(const SymbolSet& other) const {
    SymbolSet out;
    std::set_symmetric_difference(symbols_.begin(), symbols_.end(), other.symbols_.begin(),
                                  other.symbols_.end(), std::back_inserter(out.symbols_));
    return out;
}

Occupancy empty_occupancy(int n_qubits) {
    return Occupancy(static_cast<std::size_t>(n_qubits));
}

ReplayTrace replay_occupancy(const PulseSchedule& schedule, const Occupancy& initial) {
    const int n = schedule.n_qubits;
    if (initial.size() != static_cast<std::size_t>(n)) {
        throw ScheduleError("replay: initial occupancy has the wrong length");
    }
    ReplayTrace trace;
    Occupancy occ = initial;
    const int n_windows = static_cast<int>(schedule.windows.size());

    auto boundary = [&](const std::vector<BoundaryEvent>& events, int window) {
        for (const BoundaryEvent& e : events) {
            check_qubit_range(e.qubit, n, "replay");
            auto& cell = occ[static_cast<std::size_t>(e.qubit)];
            if (e.kind == EventKind::read_reset) {
                trace.reads.push_back(ReadRecord{window, e.qubit, cell});
                cell = SymbolSet{};
            } else if (e.kind == EventKind::inject) {
                if (!cell.empty()) {
                    trace.violations.push_back({window, e.qubit, ViolationKind::inject_not_empty,
                                                "inject into qubit " + std::to_string(e.qubit) +
                                                    " which is not |0>"});
                }
                if (!e.data_id) {
                    trace.violations.push_back({window, e.qubit, ViolationKind::missing_data_id,
                                                "inject without a data id"});
                    cell = SymbolSet{};
                } else {
                    cell = SymbolSet::of(*e.data_id);
                }
            } else {
                throw ScheduleError("replay: boundary event of pulse kind");
            }
        }
    };

    std::set<int> flagged_ops;
    for (int w = 0; w < n_windows; ++w) {
        const ScheduleWindow& win = schedule.windows[static_cast<std::size_t>(w)];
        boundary(win.events, w);
        trace.before_window.push_back(occ);
        const Occupancy pre = occ;

        std::set<int> targets;
        for (const PulseEvent& p : win.pulses) {
            if (p.kind == EventKind::cnot_pulse || p.kind == EventKind::readout_pulse) {
                targets.insert(p.qubit);
            }
        }
        for (int t : targets) {
            if (targets.count(t + 1)) {
                trace.violations.push_back({w, t, ViolationKind::adjacent_targets,
                                            "adjacent qubits " + std::to_string(t) + " and " +
                                                std::to_string(t + 1) + " pulsed together"});
            }
        }

        auto sym = [&](int q) -> const SymbolSet& { return pre[static_cast<std::size_t>(q)]; };
        for (const PulseEvent& p : win.pulses) {
            check_qubit_range(p.qubit, n, "replay");
            const int t = p.qubit;
            const bool end = t == 0 || t == n - 1;
            if (p.kind == EventKind::hold) {
                continue;
            }
            if (p.kind == EventKind::cnot_pulse && end) {
                trace.violations.push_back({w, t, ViolationKind::illegal_pulse,
                                            "CNOT pulse on end qubit " + std::to_string(t)});
            }
            if (p.kind == EventKind::readout_pulse && !end) {
                trace.violations.push_back({w, t, ViolationKind::illegal_pulse,
                                            "READ-OUT pulse on interior qubit " + std::to_string(t)});
            }
            if (p.kind != EventKind::cnot_pulse && p.kind != EventKind::readout_pulse) {
                throw ScheduleError("replay: boundary kind listed as a pulse");
            }

            switch (p.role) {
                case PulseRole::swap: {
                    const int lo = std::min(t, p.partner);
                    const int hi = std::max(t, p.partner);
                    for (int q : {lo - 1, hi + 1}) {
                        if (q < 0 || q >= n || sym(q).empty()) {
                            continue;
                        }
                        if (p.op_id < 0 || flagged_ops.insert(p.op_id).second) {
                            trace.violations.push_back(
                                {w, q, ViolationKind::sacrificial_not_empty,
                                 "swap (" + std::to_string(lo) + "," + std::to_string(hi) +
                                     ") has non-empty outer neighbour " + std::to_string(q)});
                        }
                    }
                    break;
                }
                case PulseRole::copy:
                    if (t + 1 >= n || !(sym(t) == sym(t + 1))) {
                        trace.violations.push_back({w, t, ViolationKind::copy_precondition,
                                                    "COPY target " + std::to_string(t) +
                                                        " differs from its right neighbour"});
                    }
                    break;
                case PulseRole::readout:
                    if (!sym(t).empty()) {
                        trace.violations.push_back({w, t, ViolationKind::readout_target_not_empty,
                                                    "READ-OUT target " + std::to_string(t) +
                                                        " is not |0>"});
                    }
                    break;
                case PulseRole::none:
                    break;
            }

            SymbolSet next = sym(t);
            if (t > 0) {
                next = next ^ sym(t - 1);
            }
            if (t + 1 < n) {
                next = next ^ sym(t + 1);
            }
            occ[static_cast<std::size_t>(t)] = next;
        }
    }
    boundary(schedule.final_events, n_windows);
    trace.final_occupancy = occ;
    return trace;
}

std::vector<Violation> validate_sacrificial(const PulseSchedule& schedule,
                                            const Occupancy& initial) {
    return replay_occupancy(schedule, initial).violations;
}

std::vector<LineConflict> line_conflict_check(const PulseSchedule& schedule,
                                              const LineAssignment& assignment) {
    std::vector<LineConflict> conflicts;
    const int n = schedule.n_qubits;
    if (assignment.line_of_qubit.size() != static_cast<std::size_t>(n)) {
        conflicts.push_back({-1, -1, "line map covers " +
                                         std::to_string(assignment.line_of_qubit.size()) +
                                         " qubits, schedule has " + std::to_string(n)});
        return conflicts;
    }
    for (int q = 0; q < n; ++q) {
        const auto& line = assignment.line_of_qubit[static_cast<std::size_t>(q)];
        if (line && (*line < 0 || *line >= assignment.line_count)) {
            conflicts.push_back({-1, *line, "qubit " + std::to_string(q) +
                                                " is wired to a line outside the bank"});
        }
    }
    for (std::size_t w = 0; w < schedule.windows.size(); ++w) {
        const ScheduleWindow& win = schedule.windows[w];
        std::map<int, std::pair<int, double>> seen;  // line -> (first qubit, bias)
        for (int q = 0; q < n; ++q) {
            const double bias = win.biases[static_cast<std::size_t>(q)];
            const auto& line = assignment.line_of_qubit[static_cast<std::size_t>(q)];
            if (!line) {
                const double first = schedule.windows.front().biases[static_cast<std::size_t>(q)];
                if (bias != first) {
                    conflicts.push_back({static_cast<int>(w), -1,
                                         "qubit " + std::to_string(q) +
                                             " has no control line but its bias changes"});
                }
                continue;
            }
            auto [it, inserted] = seen.emplace(*line, std::make_pair(q, bias));
            if (!inserted && it->second.second != bias) {
                conflicts.push_back({static_cast<int>(w), *line,
                                     "qubits " + std::to_string(it->second.first) + " and " +
                                         std::to_string(q) + " share line " +
                                         std::to_string(*line) + " but need different biases"});
            }
        }
    }
    return conflicts;
}

}  // namespace qswap
