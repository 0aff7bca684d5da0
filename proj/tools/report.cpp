#include "report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "json.hpp"

namespace speller::cli {
namespace {

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::ofstream openForWrite(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw OutputError("failed writing " + path.string());
}

}  // namespace

void writeSweepCsv(std::ostream& out, const SweepResult& result) {
  out << kSweepCsvHeader << '\n';
  for (const auto& c : result.cells) {
    out << paradigmName(c.paradigm) << ',' << fmt6(c.dprime) << ',' << c.trials << ','
        << fmt6(c.accuracy) << ',' << fmt6(c.accuracyCi95) << ',' << fmt6(c.estScored) << ','
        << fmt6(c.estPresented) << ',' << fmt6(c.estCi95) << ',' << fmt6(c.stopTmaxFraction)
        << '\n';
  }
}

void writeSweepCsv(const SweepResult& result, const std::filesystem::path& path) {
  auto out = openForWrite(path);
  writeSweepCsv(out, result);
  finish(out, path);
}

void writeSweepJson(std::ostream& out, const SweepResult& result) {
  nlohmann::ordered_json doc;
  doc["trials"] = result.trials;
  doc["dprimes"] = result.dprimes;
  auto& cells = doc["cells"] = nlohmann::ordered_json::array();
  for (const auto& c : result.cells) {
    cells.push_back({{"paradigm", paradigmName(c.paradigm)},
                     {"dprime", c.dprime},
                     {"trials", c.trials},
                     {"accuracy", c.accuracy},
                     {"acc_ci95", c.accuracyCi95},
                     {"est_scored", c.estScored},
                     {"est_presented", c.estPresented},
                     {"est_ci95", c.estCi95},
                     {"stop_tmax_fraction", c.stopTmaxFraction}});
  }
  out << doc.dump(2) << '\n';
}

void writeSweepJson(const SweepResult& result, const std::filesystem::path& path) {
  auto out = openForWrite(path);
  writeSweepJson(out, result);
  finish(out, path);
}

Comparison compareToBaseline(const std::string& name, const SweepResult& condition,
                             const SweepResult& baseline, std::optional<double> dprimeBelow) {
  if (!baseline.has(Paradigm::kRcRandom)) {
    throw MissingBaseline("comparison needs an rc-random baseline sweep");
  }
  Comparison cmp;
  cmp.condition = name;
  for (Paradigm paradigm : condition.paradigms) {
    ComparisonSummary summary;
    summary.condition = name;
    summary.paradigm = paradigm;
    bool first = true;
    for (std::size_t i = 0; i < condition.dprimes.size(); ++i) {
      const double d = condition.dprimes[i];
      const auto it = std::find(baseline.dprimes.begin(), baseline.dprimes.end(), d);
      if (it == baseline.dprimes.end()) {
        throw MissingBaseline("baseline has no rc-random cell at d' = " + fmt6(d));
      }
      const auto& base = baseline.cell(Paradigm::kRcRandom, it - baseline.dprimes.begin());
      const auto& cell = condition.cell(paradigm, i);

      ComparisonRow row;
      row.paradigm = paradigm;
      row.dprime = d;
      row.accuracy = cell.accuracy;
      row.baselineAccuracy = base.accuracy;
      row.accuracyGain = cell.accuracy - base.accuracy;
      row.est = cell.estScored;
      row.baselineEst = base.estScored;
      row.estReduction = (base.estScored - cell.estScored) / base.estScored;
      cmp.rows.push_back(row);

      summary.peakAccuracy = std::max(summary.peakAccuracy, cell.accuracy);
      if (dprimeBelow && !(d < *dprimeBelow)) continue;
      if (first || row.accuracyGain > summary.maxAccuracyGain) {
        summary.maxAccuracyGain = row.accuracyGain;
        summary.maxAccuracyGainAt = d;
      }
      if (first || row.estReduction > summary.maxEstReduction) {
        summary.maxEstReduction = row.estReduction;
        summary.maxEstReductionAt = d;
      }
      first = false;
    }
    summary.collapsed = summary.peakAccuracy <= kCollapseAccuracy;
    cmp.summaries.push_back(summary);
  }
  return cmp;
}

void writeComparisonReport(std::ostream& out, std::span<const NamedSweep> conditions,
                           const SweepResult& baseline) {
  std::vector<Comparison> comparisons;
  for (const auto& c : conditions) comparisons.push_back(compareToBaseline(c.name, *c.sweep, baseline));

  out << "# per-dprime differences against rc-random (unconstrained baseline)\n";
  out << "condition,paradigm,dprime,accuracy,baseline_accuracy,accuracy_gain_pp,"
         "est,baseline_est,est_reduction_pct\n";
  for (const auto& cmp : comparisons) {
    for (const auto& r : cmp.rows) {
      out << cmp.condition << ',' << paradigmName(r.paradigm) << ',' << fmt6(r.dprime) << ','
          << fmt6(r.accuracy) << ',' << fmt6(r.baselineAccuracy) << ','
          << fmt6(100.0 * r.accuracyGain) << ',' << fmt6(r.est) << ',' << fmt6(r.baselineEst)
          << ',' << fmt6(100.0 * r.estReduction) << '\n';
    }
  }
  out << "\n# maxima over the d' grid\n";
  out << "condition,paradigm,max_accuracy_gain_pp,at_dprime,max_est_reduction_pct,at_dprime,"
         "peak_accuracy,collapse\n";
  for (const auto& cmp : comparisons) {
    for (const auto& s : cmp.summaries) {
      out << s.condition << ',' << paradigmName(s.paradigm) << ','
          << fmt6(100.0 * s.maxAccuracyGain) << ',' << fmt6(s.maxAccuracyGainAt) << ','
          << fmt6(100.0 * s.maxEstReduction) << ',' << fmt6(s.maxEstReductionAt) << ','
          << fmt6(s.peakAccuracy) << ',' << (s.collapsed ? "yes" : "no") << '\n';
    }
  }
}

void writeComparisonReport(std::span<const NamedSweep> conditions, const SweepResult& baseline,
                           const std::filesystem::path& path) {
  auto out = openForWrite(path);
  writeComparisonReport(out, conditions, baseline);
  finish(out, path);
}

void writeFlashLog(std::ostream& out, const SweepCell& cell, std::span<const TrialResult> trials) {
  const std::string prefix =
      std::string(paradigmName(cell.paradigm)) + ',' + fmt6(cell.dprime) + ',';
  for (std::size_t t = 0; t < trials.size(); ++t) {
    const auto& log = trials[t].flashLog;
    for (std::size_t step = 0; step < log.size(); ++step) {
      out << prefix << t << ',' << step << ',';
      const auto& members = log[step].flash.members();
      for (std::size_t k = 0; k < members.size(); ++k) out << (k ? " " : "") << members[k];
      out << ',';
      if (log[step].score) out << fmt6(*log[step].score);
      out << ',';
      if (log[step].maxProb) out << fmt6(*log[step].maxProb);
      out << '\n';
    }
  }
}

std::string conditionName(const PolicyConfig& policy) {
  std::string name;
  if (policy.observationDelay > 0) name += "od" + std::to_string(policy.observationDelay);
  if (policy.ttiMin > 1) {
    if (!name.empty()) name += '_';
    name += "tti" + std::to_string(policy.ttiMin);
  }
  return name.empty() ? "unconstrained" : name;
}

}  // namespace speller::cli
