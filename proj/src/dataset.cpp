//
// Copyright 2026 The LDPCP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "ldpcp/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ldpcp {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) {
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_number(const std::string& field, const std::string& origin,
                    std::size_t line_no) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw DatasetError(origin + ": line " + std::to_string(line_no) +
                       ": not a number: '" + field + "'");
  }
  return value;
}

}  // namespace

std::vector<LabeledExample> read_dataset(std::istream& in,
                                         const std::string& origin) {
  std::string line;
  if (!std::getline(in, line)) {
    throw DatasetError(origin + ": missing header row");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_csv(line);
  if (header.size() < 3 || header.back() != "label") {
    throw DatasetError(origin +
                       ": header must name k >= 2 probability columns "
                       "followed by 'label'");
  }
  const std::size_t k = header.size() - 1;

  std::vector<LabeledExample> examples;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() != k + 1) {
      throw DatasetError(origin + ": line " + std::to_string(line_no) +
                         ": expected " + std::to_string(k + 1) + " fields, got " +
                         std::to_string(fields.size()));
    }
    std::vector<double> probs(k);
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      probs[i] = parse_number(fields[i], origin, line_no);
      sum += probs[i];
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw DatasetError(origin + ": line " + std::to_string(line_no) +
                         ": probabilities sum to " + format_double(sum) +
                         ", outside the 1e-6 tolerance");
    }
    // Sums off by more than accumulated rounding get renormalized; anything
    // closer is left untouched so written files read back bit-identically.
    if (std::abs(sum - 1.0) > 1e-12) {
      for (double& p : probs) p /= sum;
      double adjusted = 0.0;
      for (double p : probs) adjusted += p;
      probs[0] += 1.0 - adjusted;
    }
    const double label_value = parse_number(fields[k], origin, line_no);
    const int label = static_cast<int>(label_value);
    if (static_cast<double>(label) != label_value || label < 0 ||
        static_cast<std::size_t>(label) >= k) {
      throw DatasetError(origin + ": line " + std::to_string(line_no) +
                         ": label must be an integer in [0," +
                         std::to_string(k) + ")");
    }
    try {
      examples.emplace_back(ProbVector(std::move(probs)), label);
    } catch (const std::exception& e) {
      throw DatasetError(origin + ": line " + std::to_string(line_no) + ": " +
                         e.what());
    }
  }
  return examples;
}

std::vector<LabeledExample> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DatasetError("cannot open dataset file: " + path.string());
  }
  return read_dataset(in, path.string());
}

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void write_dataset(std::ostream& out,
                   std::span<const LabeledExample> examples) {
  if (examples.empty()) {
    throw EmptyInputError("refusing to write an empty dataset");
  }
  const int k = examples.front().probs.num_classes();
  for (int i = 0; i < k; ++i) {
    out << 'p' << i << ',';
  }
  out << "label\n";
  for (const LabeledExample& ex : examples) {
    for (int i = 0; i < k; ++i) {
      out << format_double(ex.probs[i]) << ',';
    }
    out << ex.label << '\n';
  }
}

void write_dataset(const std::filesystem::path& path,
                   std::span<const LabeledExample> examples) {
  std::ofstream out(path);
  if (!out) {
    throw DatasetError("cannot open for writing: " + path.string());
  }
  write_dataset(out, examples);
}

void write_experiment_csv(std::ostream& out,
                          std::span<const ExperimentRecord> records) {
  out << "seed,method,score,epsilon,eps_eff,alpha,delta_corr,q_hat,coverage,"
         "mean_set_size\n";
  for (const ExperimentRecord& r : records) {
    out << r.seed << ',' << to_string(r.method) << ',' << to_string(r.score_kind)
        << ',' << format_double(r.epsilon) << ',';
    if (r.error.empty()) {
      out << format_double(r.eps_eff) << ',' << format_double(r.alpha) << ','
          << format_double(r.delta_corr) << ',' << format_double(r.q_hat) << ','
          << format_double(r.coverage) << ',' << format_double(r.mean_set_size);
    } else {
      // Failed row: remaining numeric fields are not meaningful.
      out << "nan," << format_double(r.alpha) << ",nan,nan,nan,nan";
    }
    out << '\n';
  }
}

void write_tradeoff_csv(std::ostream& out,
                        std::span<const TradeoffRow> rows) {
  out << "n,k,epsilon,eps_eff,delta_l,delta_s\n";
  for (const TradeoffRow& row : rows) {
    out << row.n << ',' << row.k << ',' << format_double(row.epsilon) << ','
        << format_double(row.eps_eff) << ',' << format_double(row.delta_l)
        << ',' << format_double(row.delta_s) << '\n';
  }
}

}  // namespace ldpcp
