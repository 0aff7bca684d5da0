#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "speller/simulation.hpp"

namespace speller::cli {

inline constexpr const char* kSweepCsvHeader =
    "paradigm,dprime,trials,accuracy,acc_ci95,est_scored,est_presented,est_ci95,"
    "stop_tmax_fraction";

// One row per (paradigm, d') in sweep order, 6 significant digits.
void writeSweepCsv(std::ostream& out, const SweepResult& result);
void writeSweepCsv(const SweepResult& result, const std::filesystem::path& path);

// Same content as the CSV, as {"trials": n, "cells": [...]}.
void writeSweepJson(std::ostream& out, const SweepResult& result);
void writeSweepJson(const SweepResult& result, const std::filesystem::path& path);

class MissingBaseline : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ComparisonRow {
  Paradigm paradigm = Paradigm::kRcRandom;
  double dprime = 0.0;
  double accuracy = 0.0;
  double baselineAccuracy = 0.0;
  double accuracyGain = 0.0;  // absolute difference, fraction
  double est = 0.0;
  double baselineEst = 0.0;
  double estReduction = 0.0;  // (baseline - est) / baseline
};

struct ComparisonSummary {
  std::string condition;
  Paradigm paradigm = Paradigm::kRcRandom;
  double maxAccuracyGain = 0.0;
  double maxAccuracyGainAt = 0.0;
  double maxEstReduction = 0.0;
  double maxEstReductionAt = 0.0;
  double peakAccuracy = 0.0;
  bool collapsed = false;  // peak accuracy <= kCollapseAccuracy
};

inline constexpr double kCollapseAccuracy = 0.15;

struct Comparison {
  std::string condition;
  std::vector<ComparisonRow> rows;
  std::vector<ComparisonSummary> summaries;  // one per paradigm in the condition
};

// Compares every paradigm of `condition` with the rc-random cells of
// `baseline` at matching d' values. Summaries only consider d' strictly below
// `dprimeBelow` when given. Throws MissingBaseline when rc-random or a d'
// value is absent from the baseline.
Comparison compareToBaseline(const std::string& name, const SweepResult& condition,
                             const SweepResult& baseline,
                             std::optional<double> dprimeBelow = std::nullopt);

struct NamedSweep {
  std::string name;
  const SweepResult* sweep;
};

void writeComparisonReport(std::ostream& out, std::span<const NamedSweep> conditions,
                           const SweepResult& baseline);
void writeComparisonReport(std::span<const NamedSweep> conditions, const SweepResult& baseline,
                           const std::filesystem::path& path);

inline constexpr const char* kFlashLogHeader = "paradigm,dprime,trial,step,members,score,posterior_max";

// Line per presented flash; score and posterior_max are empty for flashes
// still in flight when the trial stopped.
void writeFlashLog(std::ostream& out, const SweepCell& cell, std::span<const TrialResult> trials);

// "unconstrained", "od6", "tti3" or "od6_tti3".
std::string conditionName(const PolicyConfig& policy);

}  // namespace speller::cli
