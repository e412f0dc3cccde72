#include "cli/trace.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "simenv/errors.hpp"

namespace simenv_cli {

namespace {

// Shortest representation that round-trips to the same double.
std::string num(double v) {
  nlohmann::json j = v;
  return j.dump();
}

void write_csv(const std::vector<TraceRecord>& records, std::ostream& out) {
  out << "day,temp,humidity,alive,dead,water_use,action,reward\n";
  for (const TraceRecord& r : records) {
    out << r.day << ',' << num(r.temp) << ',' << num(r.humidity) << ','
        << r.alive << ',' << r.dead << ',' << num(r.water_use) << ',';
    if (r.action) {
      out << num(*r.action);
    }
    out << ',';
    if (r.reward) {
      out << num(*r.reward);
    }
    out << '\n';
  }
}

void write_jsonl(const std::vector<TraceRecord>& records, std::ostream& out) {
  for (const TraceRecord& r : records) {
    nlohmann::json j{{"day", r.day},        {"temp", r.temp},
                     {"humidity", r.humidity}, {"alive", r.alive},
                     {"dead", r.dead},      {"water_use", r.water_use}};
    if (r.action) {
      j["action"] = *r.action;
    }
    if (r.reward) {
      j["reward"] = *r.reward;
    }
    out << j.dump() << '\n';
  }
}

}  // namespace

void write_trace(const std::vector<TraceRecord>& records, TraceFormat format,
                 std::ostream& out) {
  if (records.empty()) {
    throw simenv::ContractError("write_trace: no records");
  }
  if (format == TraceFormat::Csv) {
    write_csv(records, out);
  } else {
    write_jsonl(records, out);
  }
}

void write_trace(const std::vector<TraceRecord>& records, TraceFormat format,
                 const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw simenv::ContractError("write_trace: cannot open path: " + path);
  }
  write_trace(records, format, out);
  out.flush();
  if (!out) {
    throw simenv::ContractError("write_trace: write failed for path: " + path);
  }
}

std::string format_trace(const std::vector<TraceRecord>& records,
                         TraceFormat format) {
  std::ostringstream out;
  write_trace(records, format, out);
  return out.str();
}

}  // namespace simenv_cli
