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

#ifndef LDPCP_DATASET_HPP_
#define LDPCP_DATASET_HPP_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ldpcp/simulate.hpp"
#include "ldpcp/types.hpp"

namespace ldpcp {

// Dataset files are CSV with header p0,...,p{k-1},label and one example per
// row. Probability rows whose sum is within 1e-6 of 1 are renormalized;
// anything further off is rejected with the offending line number.
std::vector<LabeledExample> read_dataset(const std::filesystem::path& path);
std::vector<LabeledExample> read_dataset(std::istream& in,
                                         const std::string& origin);

// Doubles are written with round-trip precision, so write/read is exact.
void write_dataset(const std::filesystem::path& path,
                   std::span<const LabeledExample> examples);
void write_dataset(std::ostream& out, std::span<const LabeledExample> examples);

std::string format_double(double value);

void write_experiment_csv(std::ostream& out,
                          std::span<const ExperimentRecord> records);
void write_tradeoff_csv(std::ostream& out,
                        std::span<const TradeoffRow> rows);

}  // namespace ldpcp

#endif  // LDPCP_DATASET_HPP_
