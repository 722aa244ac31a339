// Copyright 2026 The reident Authors
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

#include "reident/attack.hpp"

#include <algorithm>
#include <ostream>

#include <json.hpp>

#include "reident/error.hpp"
#include "reident/parallel.hpp"
#include "text_io.hpp"

namespace reident {
namespace {

// Views of one candidate's channels, possibly reduced to one class.
struct CandidateView {
  std::array<std::vector<double>, 6> filtered;
  std::array<std::span<const double>, 6> channel;
  bool empty = false;
};

CandidateView MakeView(const SubjectRecord& record,
                       std::optional<AffectiveClass> cls) {
  CandidateView view;
  if (!cls) {
    for (Modality m : kAllModalities) view.channel[Index(m)] = record.at(m).values;
    return view;
  }
  for (Modality m : kAllModalities) {
    const SensorSeries& s = record.at(m);
    auto& out = view.filtered[Index(m)];
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s.labels[i] == *cls) out.push_back(s.values[i]);
    }
    view.channel[Index(m)] = out;
    if (out.empty()) view.empty = true;
  }
  return view;
}

}  // namespace

const ScoreRow* ScoreTable::Find(const std::string& handle) const {
  auto it = std::lower_bound(
      rows.begin(), rows.end(), handle,
      [](const ScoreRow& r, const std::string& h) { return r.handle < h; });
  return it != rows.end() && it->handle == handle ? &*it : nullptr;
}

ScoreTable RunAttack(const AttackInstance& instance, const DtwConfig& config,
                     std::size_t threads) {
  const std::size_t n = instance.collection.size();
  std::vector<CandidateView> views(n);
  ParallelFor(n, threads, [&](std::size_t c) {
    views[c] = MakeView(*instance.collection[c].record, instance.candidate_class);
  });

  std::array<std::span<const double>, 6> snippet;
  for (Modality m : kAllModalities) {
    auto it = instance.attacker_snippet.find(m);
    if (it == instance.attacker_snippet.end()) {
      throw Error("attacker snippet lacks " + std::string(ToString(m)));
    }
    snippet[Index(m)] = it->second.values;
  }

  ScoreTable table;
  table.target_id = instance.target_id;
  table.rows.resize(n);
  ParallelFor(n * kNumSensors, threads, [&](std::size_t task) {
    const std::size_t c = task / kNumSensors;
    const Sensor sensor = kAllSensors[task % kNumSensors];
    const CandidateView& view = views[c];
    double similarity = 0.0;
    if (!view.empty) {
      double distance;
      if (sensor == Sensor::kAcc) {
        AxisSpans xs, ys;
        const auto axes = ModalitiesOf(Sensor::kAcc);
        for (std::size_t a = 0; a < 3; ++a) {
          xs[a] = snippet[Index(axes[a])];
          ys[a] = view.channel[Index(axes[a])];
        }
        distance = AccFusedDistance(xs, ys, config);
      } else {
        const auto m = Index(ModalitiesOf(sensor).front());
        distance = DtwDistance(snippet[m], view.channel[m], config);
      }
      similarity = ToSimilarity(distance);
    }
    table.rows[c].similarity[Index(sensor)] = similarity;
  });
  for (std::size_t c = 0; c < n; ++c) {
    table.rows[c].handle = instance.collection[c].handle;
    if (views[c].empty) {
      table.warnings.push_back("candidate " + instance.collection[c].handle +
                               " has no samples of class " +
                               std::string(ToString(*instance.candidate_class)) +
                               "; scored 0");
    }
  }
  std::sort(table.rows.begin(), table.rows.end(),
            [](const ScoreRow& a, const ScoreRow& b) { return a.handle < b.handle; });
  return table;
}

void WriteScoreTablesJson(const std::vector<ScoreTable>& tables,
                          std::ostream& out) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const ScoreTable& t : tables) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const ScoreRow& r : t.rows) {
      nlohmann::ordered_json row;
      row["handle"] = r.handle;
      for (Sensor s : kAllSensors) row[std::string(ToString(s))] = r[s];
      rows.push_back(row);
    }
    nlohmann::ordered_json entry;
    entry["target"] = t.target_id;
    entry["warnings"] = t.warnings;
    entry["rows"] = rows;
    doc.push_back(entry);
  }
  out << doc.dump(2) << '\n';
}

void WriteScoreTablesCsv(const std::vector<ScoreTable>& tables,
                         std::ostream& out) {
  out << "target,handle,sensor,similarity\n";
  std::string line;
  for (const ScoreTable& t : tables) {
    for (const ScoreRow& r : t.rows) {
      for (Sensor s : kAllSensors) {
        line = t.target_id + ',' + r.handle + ',' + std::string(ToString(s)) + ',';
        textio::AppendDouble(line, r[s]);
        out << line << '\n';
      }
    }
  }
}

}  // namespace reident
