#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "report.hpp"
#include "run_spec.hpp"
#include "speller/gain.hpp"
#include "speller/simulation.hpp"

namespace fs = std::filesystem;
using namespace speller;
using namespace speller::cli;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

std::shared_ptr<GainCurveCache> makeCurveCache(const RunSpec& spec) {
  if (spec.curveCacheDir.empty()) return std::make_shared<GainCurveCache>();
  return std::make_shared<GainCurveCache>(fs::path(spec.curveCacheDir));
}

// Runs one condition, streaming flash logs to <logDir>/<condition>_flashes.csv.
SweepResult runCondition(const RunSpec& spec, const TrialConfig& base,
                         const std::vector<Paradigm>& paradigms,
                         const std::shared_ptr<GainCurveCache>& curves) {
  const std::string name = conditionName(base.policy);
  SweepOptions options;
  options.threads = spec.threads;
  options.curves = curves;

  std::optional<std::ofstream> log;
  if (!spec.logDir.empty()) {
    fs::create_directories(spec.logDir);
    const auto path = fs::path(spec.logDir) / (name + "_flashes.csv");
    log.emplace(path, std::ios::binary | std::ios::trunc);
    if (!*log) throw OutputError("cannot open " + path.string() + " for writing");
    *log << kFlashLogHeader << '\n';
    options.keepFlashLogs = true;
  }
  options.onCell = [&](const SweepCell& cell, std::span<const TrialResult> trials) {
    if (log) writeFlashLog(*log, cell, trials);
    if (spec.verbosity >= 2) {
      std::fprintf(stderr, "[%s] %-15s d'=%-5g acc=%.4f est=%.2f\n", name.c_str(),
                   std::string(paradigmName(cell.paradigm)).c_str(), cell.dprime, cell.accuracy,
                   cell.estScored);
    }
  };
  if (spec.verbosity >= 1) {
    std::fprintf(stderr, "running condition %s: %zu paradigm(s) x %zu d' x %d trials\n",
                 name.c_str(), paradigms.size(), spec.dprimes.size(), spec.trials);
  }
  return runSweep(base, spec.dprimes, paradigms, spec.trials, options);
}

int runSweepCommand(const RunSpec& spec) {
  auto curves = makeCurveCache(spec);
  const TrialConfig base = spec.trialConfig();
  const SweepResult result = runCondition(spec, base, spec.paradigms, curves);
  writeSweepCsv(result, spec.outCsv);
  writeSweepJson(result, spec.jsonPath());
  if (!spec.reportPath.empty()) {
    const std::vector<NamedSweep> conditions{{conditionName(base.policy), &result}};
    writeComparisonReport(conditions, result, spec.reportPath);
  }
  return 0;
}

int runReproduceCommand(const RunSpec& spec) {
  auto curves = makeCurveCache(spec);
  const fs::path dir(spec.outDir);
  fs::create_directories(dir);

  const int delay = spec.observationDelay > 0 ? spec.observationDelay : 6;
  const int tti = spec.ttiMin > 1 ? spec.ttiMin : 3;
  std::vector<Paradigm> adaptive;
  for (auto p : spec.paradigms) {
    if (p != Paradigm::kRcRandom) adaptive.push_back(p);
  }

  TrialConfig unconstrained = spec.trialConfig();
  unconstrained.policy.observationDelay = 0;
  unconstrained.policy.ttiMin = 1;
  std::vector<Paradigm> all{Paradigm::kRcRandom};
  all.insert(all.end(), adaptive.begin(), adaptive.end());

  TrialConfig delayed = unconstrained;
  delayed.policy.observationDelay = delay;
  TrialConfig constrained = delayed;
  constrained.policy.ttiMin = tti;

  std::vector<std::pair<std::string, SweepResult>> results;
  for (const auto* cfg : {&unconstrained, &delayed, &constrained}) {
    const auto& paradigms = cfg == &unconstrained ? all : adaptive;
    if (paradigms.empty()) continue;
    auto sweep = runCondition(spec, *cfg, paradigms, curves);
    const std::string name = conditionName(cfg->policy);
    writeSweepCsv(sweep, dir / (name + ".csv"));
    writeSweepJson(sweep, dir / (name + ".json"));
    results.emplace_back(name, std::move(sweep));
  }

  std::vector<NamedSweep> named;
  for (const auto& [name, sweep] : results) named.push_back({name, &sweep});
  writeComparisonReport(named, results.front().second, dir / "comparison.csv");
  if (spec.verbosity >= 1) std::fprintf(stderr, "wrote results to %s\n", dir.c_str());
  return 0;
}

int runCurveCommand(const RunSpec& spec) {
  const fs::path dir(spec.outDir);
  fs::create_directories(dir);
  GainCurveCache cache(dir);
  for (double d : spec.dprimes) {
    const auto curve = cache.get(LikelihoodModel::fromDprime(d), spec.curveGridSize);
    char name[64];
    std::snprintf(name, sizeof name, "curve_d%g.csv", d);
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot write " + (dir / name).string());
    out << "p1,gain\n";
    char line[64];
    for (int i = 0; i < curve->gridSize(); ++i) {
      std::snprintf(line, sizeof line, "%.6g,%.10g\n", curve->p1At(i), curve->values()[i]);
      out << line;
    }
    std::printf("dprime=%g p_opt=%.7f gain_max=%.10g\n", d, curve->pOpt(), curve->gainMax());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  RunSpec spec;
  try {
    spec = parseArgs(std::vector<std::string>(argv + 1, argv + argc));
  } catch (const UsageError& e) {
    if (e.exitCode() == 0) {
      std::cout << e.what();
      return 0;
    }
    std::cerr << "speller: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  }

  try {
    switch (spec.command) {
      case Command::kSweep: return runSweepCommand(spec);
      case Command::kReproduce: return runReproduceCommand(spec);
      case Command::kCurve: return runCurveCommand(spec);
    }
  } catch (const std::exception& e) {
    std::cerr << "speller: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
