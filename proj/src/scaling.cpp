#include "kg/scaling.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace kg {
namespace {

// Minimal RFC-4180-style row split: quoted fields may contain commas and
// doubled quotes; rows never span lines.
std::vector<std::string> split_csv_row(const std::string& line, int line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  if (quoted) {
    throw std::runtime_error("line " + std::to_string(line_no) +
                             ": unterminated quoted field");
  }
  fields.push_back(cur);
  return fields;
}

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_double(const std::string& s, int line_no, const std::string& col) {
  const std::string t = trim(s);
  try {
    size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": column '" +
                             col + "' is not a number: '" + s + "'");
  }
}

int parse_int(const std::string& s, int line_no, const std::string& col) {
  const double v = parse_double(s, line_no, col);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": column '" +
                             col + "' is not an integer: '" + s + "'");
  }
  return i;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string format_g17(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::vector<ScalingRecord> read_scaling_csv(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) {
    throw std::runtime_error("machines CSV is empty");
  }
  ++line_no;
  const std::vector<std::string> header = split_csv_row(line, line_no);
  std::map<std::string, size_t> col;
  for (size_t c = 0; c < header.size(); ++c) col[trim(header[c])] = c;
  for (const char* required : {"machine", "cores", "time_seconds"}) {
    if (!col.count(required)) {
      throw std::runtime_error(std::string("machines CSV header misses '") +
                               required + "'");
    }
  }

  std::vector<ScalingRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_csv_row(line, line_no);
    if (fields.size() != header.size()) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": has " +
                               std::to_string(fields.size()) +
                               " fields, header has " +
                               std::to_string(header.size()));
    }
    ScalingRecord r;
    for (size_t c = 0; c < header.size(); ++c) {
      const std::string name = trim(header[c]);
      const std::string& value = fields[c];
      if (name == "machine") {
        r.machine = trim(value);
      } else if (name == "cores") {
        r.cores = parse_int(value, line_no, name);
        if (r.cores < 1) {
          throw std::runtime_error("line " + std::to_string(line_no) +
                                   ": cores must be >= 1");
        }
      } else if (name == "time_seconds") {
        r.time_seconds = parse_double(value, line_no, name);
        if (!(r.time_seconds > 0.0)) {
          throw std::runtime_error("line " + std::to_string(line_no) +
                                   ": time_seconds must be positive");
        }
      } else if (name == "node_type") {
        r.node_type = trim(value);
      } else if (name == "interconnect") {
        r.interconnect = trim(value);
      } else if (name == "chip_bandwidth_gbs") {
        if (!trim(value).empty())
          r.chip_bandwidth_gbs = parse_double(value, line_no, name);
      } else if (name == "peak_tflops") {
        if (!trim(value).empty())
          r.peak_tflops = parse_double(value, line_no, name);
      } else {
        r.extra[name] = value;
      }
    }
    if (r.machine.empty()) {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": empty machine name");
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<ScalingRecord> read_scaling_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return read_scaling_csv(in);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_scaling_csv(std::ostream& out,
                       const std::vector<ScalingRecord>& records) {
  std::set<std::string> extra_keys;
  for (const auto& r : records) {
    for (const auto& [k, v] : r.extra) extra_keys.insert(k);
  }
  out << "machine,cores,time_seconds,node_type,interconnect,"
         "chip_bandwidth_gbs,peak_tflops";
  for (const auto& k : extra_keys) out << ',' << csv_escape(k);
  out << '\n';
  for (const auto& r : records) {
    out << csv_escape(r.machine) << ',' << r.cores << ','
        << format_g17(r.time_seconds) << ',' << csv_escape(r.node_type) << ','
        << csv_escape(r.interconnect) << ','
        << (r.chip_bandwidth_gbs ? format_g17(*r.chip_bandwidth_gbs) : "")
        << ',' << (r.peak_tflops ? format_g17(*r.peak_tflops) : "");
    for (const auto& k : extra_keys) {
      auto it = r.extra.find(k);
      out << ',' << (it == r.extra.end() ? "" : csv_escape(it->second));
    }
    out << '\n';
  }
}

std::vector<RankedMachine> rank(const std::vector<ScalingRecord>& records) {
  if (records.empty()) {
    throw std::invalid_argument("rank: no records");
  }
  std::map<std::string, ScalingRecord> best;
  for (const auto& r : records) {
    auto it = best.find(r.machine);
    if (it == best.end() || r.time_seconds < it->second.time_seconds) {
      best[r.machine] = r;
    }
  }
  std::vector<RankedMachine> ranked;
  ranked.reserve(best.size());
  for (const auto& [machine, record] : best) {
    ranked.push_back(
        RankedMachine{machine, record.time_seconds, record.cores, record});
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const RankedMachine& a, const RankedMachine& b) {
              if (a.best_seconds != b.best_seconds)
                return a.best_seconds < b.best_seconds;
              return a.machine < b.machine;
            });
  return ranked;
}

}  // namespace kg
