#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hetnet/report.hpp"

using namespace hetnet;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Codes that mean "the input is wrong" rather than "we broke".
bool is_validation_code(const std::string& c) {
  for (const char* k : {"ParseError", "SchemaError", "InvariantError", "IncompleteClique", "NotApplicable",
                        "NotRepresentable", "InconsistentRadial", "ConfigError", "CertificationFailed"})
    if (c == k) return true;
  return false;
}

int report_error(const std::string& stage, const std::string& code, const std::string& msg) {
  json e;
  e["schema_version"] = "1";
  e["error"] = {{"stage", stage}, {"code", code}, {"message", msg}};
  std::cerr << e.dump(2) << "\n";
  return is_validation_code(code) ? 2 : 1;
}

void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw Error("IOError", "cannot write " + p.string());
  out << text;
}

std::string classify_markdown(const json& c) {
  std::ostringstream os;
  os << "# Classification\n\nac-network: " << (c["ac_network"].get<bool>() ? "yes" : "no") << "\n\n";
  for (const auto& v : c["violations"])
    os << "- " << v["kind"].get<std::string>() << ": " << v["message"].get<std::string>() << "\n";
  for (const auto& q : c["delta_cliques"])
    os << "- clique b=" << q["b"] << " m=" << q["m"] << " e=" << q["e"] << "\n";
  if (c.contains("decompositions"))
    for (const auto& d : c["decompositions"]) os << "\n```\n" << d.dump(2) << "\n```\n";
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hetnet: stability analysis of heteroclinic networks"};
  app.require_subcommand(1);

  double tol = kDefaultTol;
  std::string out, format = "json";
  app.add_option("--tol", tol, "cycle-product tolerance");
  app.add_option("-o,--out", out, "output file or directory");
  app.add_option("--format", format, "stdout format")->check(CLI::IsMember({"json", "md"}));

  std::string net_path, field_path;

  auto* validate = app.add_subcommand("validate", "parse and check a network file");
  validate->add_option("network", net_path)->required();

  auto* classify = app.add_subcommand("classify", "ac checks, cliques and structure decomposition");
  classify->add_option("network", net_path)->required();

  std::string theorem = "all";
  std::size_t max_witnesses = 50;
  auto* analyze_cmd = app.add_subcommand("analyze", "stability conditions and verdicts");
  analyze_cmd->add_option("network", net_path)->required();
  analyze_cmd->add_option("--theorem", theorem)->check(CLI::IsMember({"thas", "thas2", "lv", "all"}));
  analyze_cmd->add_option("--max-witnesses", max_witnesses);

  auto* realize = app.add_subcommand("realize", "synthesize a vector field");
  realize->add_option("network", net_path)->required();

  auto* certify = app.add_subcommand("certify", "check that a field realizes every connection");
  certify->add_option("network", net_path)->required();
  certify->add_option("field", field_path)->required();

  ExperimentConfig cfg;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo stability experiment");
  simulate->add_option("network", net_path)->required();
  simulate->add_option("field", field_path)->required();
  simulate->add_option("--eps", cfg.epsilon);
  simulate->add_option("--samples", cfg.n_samples);
  simulate->add_option("--seed", cfg.seed);
  simulate->add_option("--tmax", cfg.T_max);

  ReportOptions ropt;
  bool no_simulate = false;
  auto* report = app.add_subcommand("report", "full pipeline, writes report.json and report.md");
  report->add_option("network", net_path)->required();
  report->add_flag("--no-simulate", no_simulate);
  report->add_option("--samples", ropt.experiment.n_samples);
  report->add_option("--seed", ropt.experiment.seed);

  for (auto* s : app.get_subcommands({})) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  std::string stage = "validate";
  auto emit = [&](const json& j, const std::string& md) {
    if (format == "md" && !md.empty()) std::cout << md;
    else std::cout << j.dump(2) << "\n";
  };

  try {
    Network net = load_network(net_path);

    if (*validate) {
      json j;
      j["schema_version"] = "1";
      j["valid"] = true;
      j["network"] = to_json(net);
      emit(j, "");
      return 0;
    }

    if (*classify) {
      stage = "classify";
      bool ok = true;
      json j = classify_to_json(net, ok);
      emit(j, classify_markdown(j));
      return ok ? 0 : 2;
    }

    if (*analyze_cmd) {
      stage = "analyze";
      AnalysisOptions opt;
      opt.tol = tol;
      opt.max_witnesses = max_witnesses;
      opt.thas = theorem == "thas" || theorem == "all";
      opt.thas2 = theorem == "thas2" || theorem == "all";
      opt.lv = theorem == "lv" || theorem == "all";
      Analysis a = analyze(net, opt);
      emit(analysis_to_json(net, a), analysis_to_markdown(net, a));
      return a.stable() ? 0 : 3;
    }

    if (*realize) {
      stage = "realize";
      const std::string text = field_to_json(synthesize_field(net)).dump(2) + "\n";
      if (out.empty()) std::cout << text;
      else write_file(out, text);
      return 0;
    }

    if (*certify) {
      stage = "certify";
      VectorField f = load_field(field_path);
      CertifyReport rep = certify_connections(f, net);
      emit(certify_to_json(rep), "");
      return rep.pass() ? 0 : 2;
    }

    if (*simulate) {
      stage = "certify";
      VectorField f = load_field(field_path);
      CertifyReport cert = certify_connections(f, net);
      if (!cert.pass()) return report_error(stage, "CertificationFailed", certify_to_json(cert).dump());
      stage = "simulate";
      cfg.keep_samples = !out.empty();
      ExperimentReport ex = stability_experiment(f, net, cert, cfg);
      emit(experiment_to_json(ex), "");
      if (!out.empty()) {
        fs::create_directories(out);
        for (const auto& t : ex.trajectories) {
          const std::string base = "trajectory_" + std::to_string(t.index);
          write_trajectory_csv((fs::path(out) / (base + ".csv")).string(), t, net.n);
          write_enter_svg((fs::path(out) / (base + ".svg")).string(), t);
        }
      }
      return ex.aggregate == Aggregate::EMPIRICALLY_STABLE ? 0 : 3;
    }

    if (*report) {
      stage = "report";
      ropt.analysis.tol = tol;
      ropt.simulate = !no_simulate;
      ropt.source = net_path;
      ConsolidatedReport rep = build_report(net, ropt);
      const fs::path dir = out.empty() ? fs::path(".") : fs::path(out);
      fs::create_directories(dir);
      write_file(dir / "report.json", rep.json.dump(2) + "\n");
      write_file(dir / "report.md", rep.markdown);
      emit(rep.json, rep.markdown);
      if (!rep.ac_ok) return 2;
      return rep.analytic_stable ? 0 : 3;
    }
  } catch (const Error& e) {
    return report_error(stage, e.code(), e.what());
  } catch (const std::exception& e) {
    return report_error(stage, "InternalError", e.what());
  }
  return 1;
}
