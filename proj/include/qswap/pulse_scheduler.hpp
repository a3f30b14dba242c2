// pulse_scheduler.hpp: bias-pulse schedules for swapping and copying channels
//
// A schedule is a sequence of equal-width windows. In each window every qubit
// holds one bias: idle qubits sit at +eps_high, an interior target of a CNOT
// or COPY pulse drops to 0, and an end-qubit target drops to xi (READ-OUT).
// Instantaneous classical events (inject, read/reset) fire at window starts.

#pragma once

#include "qswap/chain_model.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qswap {

enum class EventKind { cnot_pulse, readout_pulse, hold, inject, read_reset };
enum class PulseRole { none, swap, copy, readout };

std::string_view to_string(EventKind kind);
std::string_view to_string(PulseRole role);
EventKind event_kind_from_string(std::string_view name);
PulseRole pulse_role_from_string(std::string_view name);

struct PulseEvent {
    double start_ns = 0.0;
    double duration_ns = 0.0;
    EventKind kind = EventKind::cnot_pulse;
    int qubit = 0;
    PulseRole role = PulseRole::none;
    int op_id = -1;    // groups the three pulses of one swap
    int partner = -1;  // other qubit of the swap

    bool operator==(const PulseEvent&) const = default;
};

// inject or read_reset at a window boundary.
struct BoundaryEvent {
    EventKind kind = EventKind::inject;
    int qubit = 0;
    std::optional<int> data_id;  // inject: which input; read: which input is expected

    bool operator==(const BoundaryEvent&) const = default;
};

struct ScheduleWindow {
    double start_ns = 0.0;
    double duration_ns = 0.0;
    BiasProfile biases;
    std::vector<BoundaryEvent> events;  // applied in order before the window evolves
    std::vector<PulseEvent> pulses;

    bool operator==(const ScheduleWindow&) const = default;
};

struct PulseSchedule {
    int n_qubits = 0;
    double pulse_ns = 0.0;
    std::vector<ScheduleWindow> windows;
    std::vector<BoundaryEvent> final_events;  // after the last window

    double makespan_ns() const;
    int pulse_count() const;
    bool operator==(const PulseSchedule&) const = default;
};

struct LineAssignment {
    std::vector<std::optional<int>> line_of_qubit;  // nullopt: static bias, no control line
    int line_count = 0;                            // size of the line bank

    int lines_used() const;
    bool operator==(const LineAssignment&) const = default;
};

struct ChannelPlan {
    PulseSchedule schedule;
    LineAssignment lines;
};

// Throws ScheduleError if windows do not tile the time axis or carry the wrong number of biases.
void check_tiling(const PulseSchedule& schedule);

// The three pulses of a swap between adjacent qubits, targeting (left, right, left).
// End qubits get READ-OUT pulses, interior qubits CNOT pulses.
std::vector<PulseEvent> swap_pulses(const ChainSpec& spec, int left, int right, double pulse_ns,
                                    double start_ns, int op_id = 0);

// Lays pulses onto a window grid of width pulse_ns and fills in the biases.
// `events` may be shorter than n_windows.
PulseSchedule assemble_schedule(const ChainSpec& spec, double pulse_ns, int n_windows,
                                std::span<const PulseEvent> pulses,
                                std::vector<std::vector<BoundaryEvent>> events = {},
                                std::vector<BoundaryEvent> final_events = {});

enum class LineScheme {
    eight_line,  // interior position mod 6, plus dedicated IN and OUT lines
    compact_five  // interior position mod 3, plus IN and OUT
};

struct QuantumScheduleOptions {
    LineScheme line_scheme = LineScheme::eight_line;
    // Even chains put an odd number of swaps on every state; only for
    // demonstrating the resulting phase defect.
    bool allow_even_length = false;
};

// Pipelined swapping channel with three positions between states: macro-step
// k swaps every pair (p, p+1) with p = k mod 3; state j enters IN before step 3j
// and is read from OUT right after it arrives.
ChannelPlan quantum_channel_schedule(const ChainSpec& spec, int n_states, double pulse_ns,
                                     const QuantumScheduleOptions& options = {});

// Clocked COPY shift register. Each sequence is phi1 (COPY on odd positions
// plus READ-OUT on OUT) then phi2 (COPY on even interior positions, with IN
// re-prepared at its start). OUT is read and reset after every sequence.
ChannelPlan classical_channel_schedule(const ChainSpec& spec, int n_bits, double pulse_ns);

// ---- symbolic replay -------------------------------------------------------

// A basis-level value as a parity (XOR) of input symbols; empty means |0>.
class SymbolSet {
public:
    SymbolSet() = default;
    static SymbolSet of(int symbol) { SymbolSet s; s.symbols_.push_back(symbol); return s; }

    bool empty() const noexcept { return symbols_.empty(); }
    const std::vector<int>& symbols() const noexcept { return symbols_; }
    SymbolSet operator^(const SymbolSet& other) const;
    bool operator==(const SymbolSet&) const = default;
    std::optional<int> single() const {
        return symbols_.size() == 1 ? std::optional<int>(symbols_.front()) : std::nullopt;
    }

private:
    std::vector<int> symbols_;  // sorted, unique
};

using Occupancy = std::vector<SymbolSet>;

enum class ViolationKind {
    sacrificial_not_empty,
    copy_precondition,
    readout_target_not_empty,
    inject_not_empty,
    adjacent_targets,
    illegal_pulse,
    missing_data_id
};

std::string_view to_string(ViolationKind kind);

struct Violation {
    int window = 0;  // index of the window (n_windows for final events)
    int qubit = 0;
    ViolationKind kind = ViolationKind::illegal_pulse;
    std::string message;
};

struct ReadRecord {
    int window = 0;  // the read fires at the start of this window (n_windows: after the end)
    int qubit = 0;
    SymbolSet value;
};

struct ReplayTrace {
    std::vector<Occupancy> before_window;  // after boundary events, before the pulses
    Occupancy final_occupancy;
    std::vector<ReadRecord> reads;
    std::vector<Violation> violations;
};

// Plays the schedule over basis occupancy. A CNOT pulse on an interior target
// XORs both neighbours into it; a READ-OUT pulse on an end qubit XORs its one
// neighbour. Both rules are exact for computational basis inputs.
ReplayTrace replay_occupancy(const PulseSchedule& schedule, const Occupancy& initial);

// All qubits empty.
Occupancy empty_occupancy(int n_qubits);

std::vector<Violation> validate_sacrificial(const PulseSchedule& schedule,
                                            const Occupancy& initial);

struct LineConflict {
    int window = 0;
    int line = 0;
    std::string message;
};

// Empty result means ok.
std::vector<LineConflict> line_conflict_check(const PulseSchedule& schedule,
                                              const LineAssignment& assignment);

}  // namespace qswap
