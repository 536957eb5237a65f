// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SMG_EXPORT_H_
#define SMG_EXPORT_H_

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "smg/backbone.h"
#include "smg/classify.h"
#include "smg/genotype.h"
#include "smg/latmin.h"
#include "smg/predict.h"

namespace smg {

// Ordered (key, value) pairs written as leading "# key: value" lines of a
// TSV and as the "provenance" object of a JSON document.
using Provenance = std::vector<std::pair<std::string, std::string>>;

std::string provenance_header(const Provenance& p);

// user, topic, metric, hashtag, value
std::string genome_values_tsv(const Genome& genome, const Provenance& p);
// user, topic, metric, mean, count
std::string genome_summary_tsv(const Genome& genome, const Provenance& p);

// topic, followee, follower, weight
std::string backbone_edges_tsv(std::span<const InfluenceBackbone> backbones,
                               const Provenance& p);
std::string backbone_report_json(const BackboneReport& report,
                                 const Provenance& p);
std::string overlap_tsv(std::span<const InfluenceBackbone> backbones,
                        const std::vector<std::vector<double>>& overlap,
                        const Provenance& p);

// One row per (metric, split) with a column per topic plus E[x].
std::string error_table_tsv(std::span<const LeaveOneOutResult> results,
                            const Provenance& p);
// metric, topic, size, repetition, accuracy; topic "*" is the overall value.
std::string accuracy_curve_tsv(std::span<const AccuracyCurve> curves,
                               const Provenance& p);

struct PredictorRow {
  Direction direction = Direction::kInfluencer;
  PredictorKind predictor = PredictorKind::kFollowees;
  Evaluation evaluation;
};
// direction, topic, predictor, mean_auc, instances; topic "*" is overall.
std::string evaluation_tsv(std::span<const PredictorRow> rows,
                           const Provenance& p);

// heuristic, step, node, relative_latency; step 0 is the untouched graph.
std::string trace_tsv(std::span<const MinimizationTrace> traces,
                      const Provenance& p);

std::string format_real(double value);

}  // namespace smg

#endif  // SMG_EXPORT_H_
