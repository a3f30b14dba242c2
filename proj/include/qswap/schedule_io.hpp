// schedule_io.hpp: JSON form of pulse schedules
//
// {
//   "n_qubits": 5, "pulse_ns": 10, "makespan_ns": 120,
//   "lines": {"line_count": 8, "qubit_lines": [6, 1, 2, 3, 7]} | null,
//   "windows": [{"start_ns": 0, "duration_ns": 10, "biases_mhz": [...],
//                "events": [{"kind": "inject", "qubit": 0, "data": 0}],
//                "pulses": [{"kind": "readout_pulse", "qubit": 0, "role": "swap",
//                            "op": 0, "partner": 1}]}],
//   "final_events": [...]
// }
// Pulses inherit start and duration from their window.

#pragma once

#include "qswap/pulse_scheduler.hpp"

#include <optional>
#include <string>

namespace qswap {

struct ScheduleDocument {
    PulseSchedule schedule;
    std::optional<LineAssignment> lines;
};

// Pretty-printed, newline-terminated. Parsing the output and writing it again
// gives the same bytes.
std::string write_schedule_json(const PulseSchedule& schedule,
                                const std::optional<LineAssignment>& lines = std::nullopt);

// Throws ConfigError (with a JSON pointer) on malformed or unknown fields.
ScheduleDocument read_schedule_json(const std::string& text);

}  // namespace qswap
