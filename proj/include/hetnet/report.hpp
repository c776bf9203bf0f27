#pragma once

#include <optional>
#include <string>

#include "hetnet/classify.hpp"
#include "hetnet/simulate.hpp"
#include "hetnet/stability.hpp"

namespace hetnet {

nlohmann::json rho_to_json(const RhoEstimate& r);
nlohmann::json verdict_to_json(const StabilityVerdict& v);
nlohmann::json clique_to_json(const DeltaClique& q);
nlohmann::json decomposition_to_json(const StructureDecomposition& d);

// check_ac, cliques, f-long-free cycles and decompositions. Sets `ok` to the
// ac status; decomposition errors are recorded, not thrown.
nlohmann::json classify_to_json(const Network& net, bool& ok);

// Condition in ρ notation followed by one "rho_j = <formula>" line per node.
std::string condition_block(const Network& net, const std::vector<RhoEstimate>& table);

struct AnalysisOptions {
  bool thas = true;
  bool thas2 = true;
  bool lv = true;
  double tol = kDefaultTol;
  std::size_t max_witnesses = 50;
};

struct Analysis {
  std::vector<RhoEstimate> table;
  std::string condition;
  std::optional<StabilityVerdict> thas, thas2, lv;
  // Exit status of the analytic stage: STABLE under the strongest requested theorem.
  bool stable() const;
};

Analysis analyze(const Network& net, const AnalysisOptions& opt);
nlohmann::json analysis_to_json(const Network& net, const Analysis& a);
std::string analysis_to_markdown(const Network& net, const Analysis& a);

enum class Agreement { CONSISTENT, INCONSISTENT, UNSET };
const char* agreement_name(Agreement a);

struct ReportOptions {
  AnalysisOptions analysis;
  bool simulate = true;
  ExperimentConfig experiment{1e-3, 0.1, 500.0, 20, 1, 0.1, 1e-8, 1e-30, false};
  std::string source;  // input path, shown in the report header
};

struct ConsolidatedReport {
  nlohmann::json json;
  std::string markdown;
  bool ac_ok = true;
  bool analytic_stable = false;
  Agreement agreement = Agreement::UNSET;
};

ConsolidatedReport build_report(const Network& net, const ReportOptions& opt);

}  // namespace hetnet
