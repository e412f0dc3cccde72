#ifndef SIMENV_CLI_TRACE_HPP_
#define SIMENV_CLI_TRACE_HPP_

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace simenv_cli {

/// One per-day row of an episode trace. The reset row (day 0, taken before
/// any action) has no action and no reward.
struct TraceRecord {
  int day = 0;
  double temp = 0.0;
  double humidity = 0.0;  // unclamped model value
  int alive = 0;
  int dead = 0;
  double water_use = 0.0;
  std::optional<double> action;  // applied litres
  std::optional<double> reward;

  bool operator==(const TraceRecord&) const = default;
};

enum class TraceFormat { Csv, Jsonl };

/// Serialize records. CSV uses the fixed header
/// "day,temp,humidity,alive,dead,water_use,action,reward" with empty cells
/// for absent fields; JSONL emits one object per line with absent fields
/// omitted. Numbers round-trip exactly.
void write_trace(const std::vector<TraceRecord>& records, TraceFormat format,
                 std::ostream& out);

/// As above, to a file. An unwritable path is an error naming the path.
void write_trace(const std::vector<TraceRecord>& records, TraceFormat format,
                 const std::string& path);

std::string format_trace(const std::vector<TraceRecord>& records,
                         TraceFormat format);

}  // namespace simenv_cli

#endif  // SIMENV_CLI_TRACE_HPP_
