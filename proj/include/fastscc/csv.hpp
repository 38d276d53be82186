#pragma once

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "fastscc/survival.hpp"

namespace fastscc {

// Raised on malformed input data; the CLI maps it to the data exit code.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IngestResult {
  std::vector<PopulationSample> samples;  // label order = first appearance
  std::vector<std::string> group_names;   // group_names[label - 1]
};

namespace detail {

inline std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, delim)) {
    // trim surrounding whitespace and CR
    std::size_t b = field.find_first_not_of(" \t\r");
    std::size_t e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == delim) out.push_back("");
  return out;
}

}  // namespace detail

// Delimited text with a header row. One PopulationSample per distinct group
// label, ordered by first appearance.
inline IngestResult ingest_csv(const std::string& path,
                               const std::string& time_col,
                               const std::string& status_col,
                               const std::string& group_col,
                               char delimiter = ',') {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open input file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw DataError("empty file: " + path);
  const auto header = detail::split_line(line, delimiter);
  auto column = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw DataError("column not found: " + name);
  };
  const std::size_t ti = column(time_col);
  const std::size_t si = column(status_col);
  const std::size_t gi = column(group_col);

  IngestResult result;
  std::unordered_map<std::string, int> label_of;
  std::size_t row = 1;
  std::size_t records = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto fields = detail::split_line(line, delimiter);
    if (fields.size() <= std::max({ti, si, gi}))
      throw DataError("row " + std::to_string(row) + ": too few fields");

    ObservationRecord rec;
    try {
      std::size_t pos = 0;
      rec.time = std::stod(fields[ti], &pos);
      if (pos != fields[ti].size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw DataError("row " + std::to_string(row) + ": unparseable time '" +
                      fields[ti] + "'");
    }
    if (rec.time < 0.0)
      throw DataError("row " + std::to_string(row) + ": negative time");
    if (fields[si] == "0")
      rec.event = 0;
    else if (fields[si] == "1")
      rec.event = 1;
    else
      throw DataError("row " + std::to_string(row) + ": status must be 0 or 1, got '" +
                      fields[si] + "'");
    if (fields[gi].empty())
      throw DataError("row " + std::to_string(row) + ": empty group label");

    auto it = label_of.find(fields[gi]);
    if (it == label_of.end()) {
      const int label = static_cast<int>(result.samples.size()) + 1;
      it = label_of.emplace(fields[gi], label).first;
      result.samples.push_back({label, {}});
      result.group_names.push_back(fields[gi]);
    }
    rec.population = it->second;
    result.samples[it->second - 1].records.push_back(rec);
    ++records;
  }
  if (records == 0) throw DataError("no records");
  return result;
}

}  // namespace fastscc
