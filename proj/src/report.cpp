#include "hetnet/report.hpp"

#include <sstream>

namespace hetnet {

using nlohmann::json;

const char* agreement_name(Agreement a) {
  switch (a) {
    case Agreement::CONSISTENT: return "CONSISTENT";
    case Agreement::INCONSISTENT: return "INCONSISTENT";
    case Agreement::UNSET: return "UNSET";
  }
  return "?";
}

json rho_to_json(const RhoEstimate& r) {
  json j;
  j["equilibrium"] = r.equilibrium;
  j["value"] = r.value;
  j["lemma"] = lemma_name(r.lemma);
  j["formula"] = r.formula;
  json ing = json::array();
  for (const auto& i : r.ingredients) ing.push_back({{"name", i.name}, {"symbol", i.symbol}, {"value", i.value}});
  j["ingredients"] = ing;
  if (r.missing_ingredient) j["flags"] = json::array({"MissingIngredient"});
  return j;
}

json verdict_to_json(const StabilityVerdict& v) {
  json j;
  j["theorem"] = theorem_name(v.theorem);
  j["result"] = result_name(v.result);
  j["tolerance"] = v.tolerance;
  json ws = json::array();
  for (const auto& w : v.witnesses) {
    json x;
    x["nodes"] = w.nodes;
    json fs = json::array();
    for (const auto& f : w.factors) fs.push_back({{"label", f.label}, {"value", f.value}});
    x["factors"] = fs;
    x["product"] = w.product;
    x["log_product"] = w.log_product;
    if (w.marginal) x["flags"] = json::array({"MARGINAL"});
    ws.push_back(x);
  }
  j["witnesses"] = ws;
  if (v.witnesses_truncated) j["witnesses_truncated"] = true;
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

json clique_to_json(const DeltaClique& q) {
  return {{"b", q.b},
          {"m", q.m},
          {"e", q.e},
          {"short", {q.short_conn.from, q.short_conn.to}},
          {"f_long", {q.f_long.from, q.f_long.to}},
          {"s_long", {q.s_long.from, q.s_long.to}}};
}

json decomposition_to_json(const StructureDecomposition& d) {
  json j;
  j["case"] = case_name(d.kase);
  j["base_cycle"] = d.base_cycle;
  j["J"] = d.J;
  j["primary"] = d.primary;
  if (d.kase == StructureCase::II) j["groups"] = d.groups;
  json opt = json::array();
  for (const auto& o : d.optional_connections) opt.push_back({{"from", o.from}, {"to", o.to}, {"pattern", o.pattern}});
  j["optional_connections"] = opt;
  return j;
}

json classify_to_json(const Network& net, bool& ok) {
  if (net.mode != Mode::AC)
    throw Error("NotApplicable", "the classifier refuses role-annotated networks (node off the coordinate axes)");
  json j;
  j["schema_version"] = "1";
  const AcReport rep = check_ac(net);
  ok = rep.pass();
  j["ac_network"] = ok;
  json vs = json::array();
  for (const auto& v : rep.violations) vs.push_back({{"kind", v.kind}, {"message", v.message}, {"ids", v.ids}});
  j["violations"] = vs;
  std::vector<std::array<int, 3>> missing;
  json qs = json::array();
  for (const auto& q : find_delta_cliques_lenient(net, &missing)) qs.push_back(clique_to_json(q));
  j["delta_cliques"] = qs;
  if (ok) {
    try {
      j["flong_free_cycles"] = find_flong_free_cycles(net);
      json ds = json::array();
      for (const auto& d : decompose_all(net)) ds.push_back(decomposition_to_json(d));
      j["decompositions"] = ds;
    } catch (const Error& e) {
      j["decomposition_error"] = {{"code", e.code()}, {"message", e.what()}};
      ok = false;
    }
  }
  return j;
}

std::string condition_block(const Network& net, const std::vector<RhoEstimate>& table) {
  std::ostringstream os;
  os << render_condition(net, table) << "\n";
  for (const auto& r : table) os << "rho_" << r.equilibrium << " = " << r.formula << "\n";
  return os.str();
}

bool Analysis::stable() const {
  if (thas2 || thas)
    return (thas2 && thas2->result == Result::STABLE) || (thas && thas->result == Result::STABLE);
  return lv && lv->result == Result::STABLE;
}

Analysis analyze(const Network& net, const AnalysisOptions& opt) {
  Analysis a;
  a.table = rho_table(net);
  a.condition = render_condition(net, a.table);
  if (opt.thas) a.thas = check_thas(net, opt.tol, opt.max_witnesses);
  if (opt.thas2) a.thas2 = check_thas2(net, opt.tol, opt.max_witnesses);
  if (opt.lv) a.lv = check_lv_aux(net, opt.tol);
  return a;
}

json analysis_to_json(const Network& net, const Analysis& a) {
  json j;
  j["schema_version"] = "1";
  j["mode"] = mode_name(net.mode);
  json rt = json::array();
  for (const auto& r : a.table) rt.push_back(rho_to_json(r));
  j["rho_table"] = rt;
  j["condition"] = a.condition;
  json vs = json::object();
  if (a.thas) vs["THAS"] = verdict_to_json(*a.thas);
  if (a.thas2) vs["THAS2"] = verdict_to_json(*a.thas2);
  if (a.lv) vs["LV_AUX"] = verdict_to_json(*a.lv);
  j["verdicts"] = vs;
  j["stable"] = a.stable();
  return j;
}

namespace {

std::string nodes_str(const std::vector<int>& v, bool closed) {
  std::string s;
  for (int x : v) s += (s.empty() ? "" : " -> ") + std::to_string(x);
  if (closed && !v.empty()) s += " -> " + std::to_string(v.front());
  return s;
}

void verdict_md(std::ostringstream& os, const StabilityVerdict& v) {
  os << "- " << theorem_name(v.theorem) << ": **" << result_name(v.result) << "**";
  if (!v.note.empty()) os << " (" << v.note << ")";
  os << "\n";
  for (const auto& w : v.witnesses) {
    os << "  - " << (v.theorem == Theorem::LV_AUX ? nodes_str(w.nodes, false) : nodes_str(w.nodes, true))
       << ": product " << w.product;
    if (w.marginal) os << " (MARGINAL)";
    os << "\n";
  }
  if (v.witnesses_truncated) os << "  - (witness list truncated)\n";
}

}  // namespace

std::string analysis_to_markdown(const Network& net, const Analysis& a) {
  std::ostringstream os;
  os << "## Exponents\n\n| node | lemma | formula | value |\n|---|---|---|---|\n";
  for (const auto& r : a.table)
    os << "| " << r.equilibrium << " | " << lemma_name(r.lemma) << " | `" << r.formula << "` | " << r.value
       << (r.missing_ingredient ? " (MissingIngredient)" : "") << " |\n";
  os << "\n## Stability condition\n\n```\n" << condition_block(net, a.table) << "```\n\n## Verdicts\n\n";
  if (a.thas) verdict_md(os, *a.thas);
  if (a.thas2) verdict_md(os, *a.thas2);
  if (a.lv) verdict_md(os, *a.lv);
  return os.str();
}

ConsolidatedReport build_report(const Network& net, const ReportOptions& opt) {
  ConsolidatedReport rep;
  json& j = rep.json;
  j["schema_version"] = "1";
  j["network"] = {{"source", opt.source},
                  {"n", net.n},
                  {"mode", mode_name(net.mode)},
                  {"equilibria", net.equilibria.size()},
                  {"connections", net.connections.size()}};
  std::ostringstream md;
  md << "# Network report\n\n";
  if (!opt.source.empty()) md << "Source: `" << opt.source << "`\n\n";
  md << "n = " << net.n << ", " << net.equilibria.size() << " equilibria, " << net.connections.size()
     << " connections, mode " << mode_name(net.mode) << ".\n\n## Classification\n\n";

  if (net.mode == Mode::AC) {
    bool ok = true;
    j["classification"] = classify_to_json(net, ok);
    rep.ac_ok = ok;
    const json& c = j["classification"];
    md << "ac-network: " << (ok ? "yes" : "no") << "\n\n";
    for (const auto& v : c["violations"]) md << "- violation (" << v["kind"].get<std::string>() << "): "
                                               << v["message"].get<std::string>() << "\n";
    if (!c["delta_cliques"].empty()) {
      md << "\nDelta-cliques (b, m, e):";
      for (const auto& q : c["delta_cliques"])
        md << " (" << q["b"].get<int>() << ", " << q["m"].get<int>() << ", " << q["e"].get<int>() << ")";
      md << "\n";
    }
    if (c.contains("decompositions")) {
      for (const auto& d : c["decompositions"]) {
        md << "\nStructure: case " << d["case"].get<std::string>() << ", base cycle "
           << nodes_str(d["base_cycle"].get<std::vector<int>>(), true) << (d["primary"].get<bool>() ? " (primary)" : "")
           << "\n";
        if (d.contains("groups"))
          for (std::size_t g = 0; g < d["groups"].size(); ++g)
            md << "- X_" << g + 1 << " = " << d["groups"][g].dump() << "\n";
        for (const auto& o : d["optional_connections"])
          md << "- optional " << o["from"].get<int>() << " -> " << o["to"].get<int>() << " "
             << o["pattern"].get<std::string>() << "\n";
      }
    }
    if (c.contains("decomposition_error"))
      md << "\nDecomposition failed: " << c["decomposition_error"]["message"].get<std::string>() << "\n";
  } else {
    j["classification"] = nullptr;
    md << "Role-annotated network: the classifier does not apply.\n";
  }
  md << "\n";

  if (!rep.ac_ok) {
    j["rho_table"] = nullptr;
    j["condition"] = nullptr;
    j["verdicts"] = nullptr;
    j["empirical"] = nullptr;
    j["agreement"] = agreement_name(rep.agreement);
    md << "Analysis skipped: the network fails the ac-network checks.\n";
    rep.markdown = md.str();
    return rep;
  }
  Analysis a = analyze(net, opt.analysis);
  json aj = analysis_to_json(net, a);
  j["rho_table"] = aj["rho_table"];
  j["condition"] = aj["condition"];
  j["verdicts"] = aj["verdicts"];
  rep.analytic_stable = a.stable();
  md << analysis_to_markdown(net, a);

  md << "\n## Empirical check\n\n";
  j["empirical"] = nullptr;
  if (!opt.simulate) {
    md << "Simulation not requested.\n";
  } else if (net.mode != Mode::AC) {
    md << "Skipped: fields are synthesized only for validated ac-networks.\n";
    j["empirical_note"] = "skipped: not a validated ac-network";
  } else {
    VectorField f = synthesize_field(net);
    CertifyReport cert = certify_connections(f, net);
    j["certification"] = certify_to_json(cert);
    if (!cert.pass()) {
      md << "Skipped: connection certification failed.\n";
      j["empirical_note"] = "skipped: certification failed";
    } else {
      ExperimentReport ex = stability_experiment(f, net, cert, opt.experiment);
      j["empirical"] = experiment_to_json(ex);
      md << "Result: **" << aggregate_name(ex.aggregate) << "** (" << ex.converged << " converged, " << ex.escaped
         << " escaped, " << ex.undecided << " undecided of " << opt.experiment.n_samples << "; epsilon "
         << opt.experiment.epsilon << ", T_max " << opt.experiment.T_max << ", seed " << opt.experiment.seed
         << ")\n";
      if (rep.analytic_stable)
        rep.agreement = ex.aggregate == Aggregate::EMPIRICALLY_STABLE ? Agreement::CONSISTENT : Agreement::INCONSISTENT;
      else rep.agreement = Agreement::CONSISTENT;
    }
  }
  j["agreement"] = agreement_name(rep.agreement);
  md << "\n## Agreement\n\n" << agreement_name(rep.agreement) << "\n";
  rep.markdown = md.str();
  return rep;
}

}  // namespace hetnet
