// crnkit: command-line analysis of chemical reaction networks with
// power-law kinetics. See README.md for the file format and subcommands.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "crnkit/decomposition.hpp"
#include "crnkit/equilibria.hpp"
#include "crnkit/indep.hpp"
#include "crnkit/kinetic_complexes.hpp"
#include "crnkit/kinetics.hpp"
#include "crnkit/network.hpp"
#include "crnkit/parser.hpp"
#include "crnkit/wr_cf.hpp"

namespace {

using nlohmann::json;
using namespace crnkit;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitInput = 2;
constexpr int kExitLimit = 3;

struct Options {
  std::string format = "text";
  std::uint64_t seed = 0;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> block_labels(const Network& net, const std::vector<std::size_t>& block) {
  std::vector<std::string> out;
  for (std::size_t q : block) out.push_back(net.reaction(q).label);
  return out;
}

json summary_json(const NetworkSummary& s) {
  return json{{"species", s.m},
              {"complexes", s.n},
              {"reactions", s.r},
              {"linkage_classes", s.l},
              {"strong_linkage_classes", s.sl},
              {"terminal_classes", s.t},
              {"rank", s.s},
              {"deficiency", s.delta},
              {"weakly_reversible", s.weakly_reversible},
              {"t_minimal", s.t_minimal}};
}

json nf_json(const Network& net, const NFClassification& cls) {
  json arr = json::array();
  for (const auto& rc : cls.reactants) {
    if (!rc.is_nf()) continue;
    json subsets = json::array();
    for (const auto& cf : rc.cf_subsets) subsets.push_back(block_labels(net, cf));
    arr.push_back({{"complex", render_combo(net, rc.complex_idx)}, {"cf_subsets", subsets}});
  }
  return arr;
}

json blocks_json(const Network& net, const std::vector<std::vector<std::size_t>>& blocks) {
  json arr = json::array();
  for (const auto& b : blocks) arr.push_back(block_labels(net, b));
  return arr;
}

json profile_json(const DecompositionProfile& p, const Network& net) {
  json cd = json::array();
  for (std::size_t c : p.common_complexes) cd.push_back(render_combo(net, c));
  const char* klass = p.common_class == CommonComplexClass::C_decomposition ? "C"
                      : p.common_class == CommonComplexClass::C_star_decomposition ? "C*"
                                                                                   : "neither";
  return json{{"independent", p.independent},
              {"incidence_independent", p.incidence_independent},
              {"bi_independent", p.bi_independent},
              {"weakly_reversible", p.weakly_reversible},
              {"zero_deficiency_blocks", p.zdd},
              {"common_complexes", cd},
              {"common_complex_class", klass},
              {"deficiency", p.delta},
              {"deficiency_sum", p.delta_sum}};
}

void emit(const Options& opt, const json& j) {
  if (opt.format == "json") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  // flat text rendering of the report tree
  std::function<void(const json&, const std::string&)> walk = [&](const json& node,
                                                                  const std::string& prefix) {
    if (node.is_object()) {
      for (auto it = node.begin(); it != node.end(); ++it)
        walk(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key());
    } else if (node.is_array()) {
      bool scalar = true;
      for (const auto& e : node) scalar = scalar && !e.is_structured();
      if (scalar) {
        std::string line;
        for (const auto& e : node)
          line += (line.empty() ? "" : ", ") + (e.is_string() ? e.get<std::string>() : e.dump());
        std::cout << prefix << ": [" << line << "]\n";
      } else {
        std::size_t i = 0;
        for (const auto& e : node) walk(e, prefix + "[" + std::to_string(i++) + "]");
      }
    } else {
      std::cout << prefix << ": " << (node.is_string() ? node.get<std::string>() : node.dump())
                << "\n";
    }
  };
  walk(j, "");
}

std::vector<std::vector<std::size_t>> resolve_named_blocks(const Network& net,
                                                           const std::vector<NamedBlock>& blocks) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& b : blocks) {
    std::vector<std::size_t> idx;
    for (const auto& label : b.reaction_labels) {
      auto q = net.reaction_index(label);
      if (!q) throw std::runtime_error("block '" + b.name + "': unknown reaction '" + label + "'");
      idx.push_back(*q);
    }
    out.push_back(std::move(idx));
  }
  return out;
}

// "auto" -> independent WR CF search; otherwise a file of `block` lines
// referring to the model's reaction labels.
std::vector<std::vector<std::size_t>> resolve_decomposition(const ParsedModel& m,
                                                            const std::string& spec, int& exit_code) {
  exit_code = kExitOk;
  if (spec == "auto") {
    IndepWRCFResult r = independent_wr_cf(m.net, m.F);
    if (r.outcome == WRCFOutcome::found) return r.blocks;
    exit_code = r.outcome == WRCFOutcome::resource_limit ? kExitLimit : kExitNegative;
    throw std::runtime_error("automatic decomposition failed: " + r.reason);
  }
  // a decomposition file holds `block` lines over the model's labels; reuse
  // the .crn grammar by appending them to the rendered model
  std::string doc = render_crn(ParsedModel{m.net, m.F, std::nullopt, {}});
  ParsedModel probe = parse_crn(doc + slurp(spec));
  if (probe.blocks.empty()) throw std::runtime_error("decomposition file contains no block lines");
  return resolve_named_blocks(m.net, probe.blocks);
}

int cmd_analyze(const Options& opt, const ParsedModel& m) {
  NetworkSummary s = m.net.summarize();
  NFClassification cls = classify_nodes(m.net, m.F);
  json eulerian = json::array();
  for (std::size_t lc = 0; lc < m.net.num_linkage_classes(); ++lc)
    eulerian.push_back(m.net.is_eulerian(lc));
  emit(opt, json{{"command", "analyze"},
                 {"summary", summary_json(s)},
                 {"nf_nodes", nf_json(m.net, cls)},
                 {"linkage_class_eulerian", eulerian}});
  return kExitOk;
}

int cmd_classify(const Options& opt, const ParsedModel& m) {
  SystemClass sc = classify_system(m.net, m.F);
  NFClassification cls = classify_nodes(m.net, m.F);
  emit(opt, json{{"command", "classify"},
                 {"kinetics_class", sc.kind == KineticsClass::PL_RDK ? "PL-RDK" : "PL-NDK"},
                 {"mass_action", sc.mass_action},
                 {"factor_span_surjective", sc.factor_span_surjective},
                 {"nf_nodes", nf_json(m.net, cls)}});
  return kExitOk;
}

int cmd_decompose_wr_cf(const Options& opt, const ParsedModel& m, const std::string& mode,
                        std::size_t max_cycles, std::size_t max_branches) {
  SearchLimits lim;
  lim.max_cycles = max_cycles;
  lim.max_branches = max_branches;
  SearchMode sm = mode == "greedy" ? SearchMode::greedy : SearchMode::exhaustive;
  WRCFResult r = wr_cf_search(m.net, m.F, sm, lim);
  json j{{"command", "decompose"},
         {"kind", "wr-cf"},
         {"mode", mode},
         {"outcome", r.outcome == WRCFOutcome::found            ? "found"
                     : r.outcome == WRCFOutcome::not_found_proven ? "not_found_proven"
                     : r.outcome == WRCFOutcome::not_found_greedy ? "not_found_greedy"
                                                                  : "resource_limit"},
         {"statistics",
          {{"cycles_enumerated", r.stats.cycles_enumerated},
           {"branches_explored", r.stats.branches_explored}}}};
  if (r.eulerian_fast_path) j["eulerian_fast_path"] = true;
  if (!r.reason.empty()) j["reason"] = r.reason;
  if (r.outcome == WRCFOutcome::found) {
    j["blocks"] = blocks_json(m.net, r.blocks);
    Decomposition d(m.net, r.blocks);
    j["profile"] = profile_json(profile(m.net, d), m.net);
    emit(opt, j);
    return kExitOk;
  }
  emit(opt, j);
  return r.outcome == WRCFOutcome::resource_limit ? kExitLimit : kExitNegative;
}

int cmd_decompose_independent(const Options& opt, const ParsedModel& m) {
  FinestIndependentDecomposition fd = finest_independent(m.net);
  Decomposition d(m.net, fd.blocks);
  emit(opt, json{{"command", "decompose"},
                 {"kind", "independent"},
                 {"nontrivial", fd.nontrivial},
                 {"blocks", blocks_json(m.net, d.blocks())},
                 {"profile", profile_json(profile(m.net, d), m.net)}});
  return fd.nontrivial ? kExitOk : kExitNegative;
}

int cmd_decompose_independent_wr_cf(const Options& opt, const ParsedModel& m) {
  IndepWRCFResult r = independent_wr_cf(m.net, m.F);
  json j{{"command", "decompose"},
         {"kind", "independent-wr-cf"},
         {"outcome", r.outcome == WRCFOutcome::found ? "found"
                     : r.outcome == WRCFOutcome::resource_limit ? "resource_limit"
                                                                : "not_found_proven"}};
  if (!r.reason.empty()) j["reason"] = r.reason;
  if (r.outcome == WRCFOutcome::found) {
    Decomposition d(m.net, r.blocks);
    j["blocks"] = blocks_json(m.net, d.blocks());
    j["profile"] = profile_json(profile(m.net, d), m.net);
    emit(opt, j);
    return kExitOk;
  }
  emit(opt, j);
  return r.outcome == WRCFOutcome::resource_limit ? kExitLimit : kExitNegative;
}

json kinetic_network_json(const KineticComplexNetwork& kn, const Network& parent) {
  json complexes = json::array();
  for (const auto& v : kn.complexes) {
    std::string s;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j].is_zero()) continue;
      if (!s.empty()) s += " + ";
      if (v[j] != Rational(1)) s += v[j].str() + " ";
      s += parent.species()[j];
    }
    complexes.push_back(s.empty() ? "0" : s);
  }
  json arcs = json::array();
  for (std::size_t a = 0; a < kn.arcs.size(); ++a) {
    json prov = json::array();
    for (std::size_t q : kn.provenance[a]) prov.push_back(parent.reaction(q).label);
    arcs.push_back({{"from", kn.arcs[a].first}, {"to", kn.arcs[a].second}, {"provenance", prov}});
  }
  json j{{"n", kn.n_tilde},     {"r", kn.r_tilde},
         {"l", kn.l_tilde},     {"s", kn.s_tilde},
         {"deficiency", kn.delta_tilde}, {"weakly_reversible", kn.weakly_reversible},
         {"kinetic_complexes", complexes}, {"arcs", arcs}};
  if (!kn.degenerate_reactions.empty()) {
    json deg = json::array();
    for (std::size_t q : kn.degenerate_reactions) deg.push_back(parent.reaction(q).label);
    j["degenerate_reactions"] = deg;
  }
  return j;
}

int cmd_kinetic_complexes(const Options& opt, const ParsedModel& m, const std::string& dspec) {
  json j{{"command", "kinetic-complexes"}};
  KineticComplexNetwork kn = kinetic_network(m.net, m.F);
  j["kinetic_network"] = kinetic_network_json(kn, m.net);
  KineticCountsReport rep = kinetic_counts_check(m.net, m.F);
  bool counts_ok = rep.n_bound_ok && rep.r_bound_ok;
  for (const auto& c : rep.per_reaction) counts_ok = counts_ok && c.ok;
  j["counts"] = {{"per_reaction_ok", counts_ok},
                 {"n_r_sum", rep.n_r_sum},
                 {"pair_sum", rep.r_pair_sum},
                 {"interaction_span_surjective", rep.interaction_span_surjective},
                 {"n_equality", rep.n_equality},
                 {"r_equality", rep.r_equality}};
  int exit_code = kExitOk;
  if (!dspec.empty()) {
    auto blocks = resolve_decomposition(m, dspec, exit_code);
    Decomposition d(m.net, blocks);
    InducedDecomposition ind = induced_decomposition(m.net, m.F, d);
    json bj = json::array();
    for (const auto& b : ind.blocks)
      bj.push_back({{"n", b.n_tilde}, {"l", b.l_tilde}, {"s", b.s_tilde}, {"deficiency", b.delta_tilde}});
    j["induced"] = {{"blocks", bj},
                    {"n", ind.n_D},
                    {"r", ind.r_D},
                    {"l", ind.l_D},
                    {"s", ind.s_D},
                    {"deficiency", ind.delta_D},
                    {"is_decomposition", ind.is_decomposition},
                    {"independent", ind.induced_independent},
                    {"incidence_independent", ind.induced_incidence_independent},
                    {"bi_level_weakly_reversible", ind.bi_level_weakly_reversible},
                    {"bi_level_independent", ind.bi_level_independent},
                    {"bi_level_bi_independent", ind.bi_level_bi_independent},
                    {"warnings", ind.warnings}};
  }
  emit(opt, j);
  return kExitOk;
}

int cmd_plp(const Options& opt, const ParsedModel& m, const std::string& dspec,
            const std::vector<std::string>& assume_plp) {
  int exit_code = kExitOk;
  auto blocks = resolve_decomposition(m, dspec, exit_code);
  Decomposition d(m.net, blocks);

  std::vector<std::optional<LPCertificate>> certs;
  std::vector<bool> assumed;
  InducedDecomposition ind = induced_decomposition(m.net, m.F, d);
  json cert_json = json::array();
  for (std::size_t b = 0; b < d.num_blocks(); ++b) {
    const auto& idx = d.blocks()[b];
    Matrix subF(idx.size(), m.F.num_species());
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t jx = 0; jx < m.F.num_species(); ++jx)
        subF(i, jx) = m.F.matrix()(idx[i], jx);
    std::string bname = "block" + std::to_string(b + 1);
    bool assume = false;
    for (const auto& a : assume_plp)
      if (a == bname || (!d.blocks()[b].empty() && a == m.net.reaction(idx[0]).label)) assume = true;
    std::optional<LPCertificate> cert;
    if (assume) {
      cert = LPCertificate(ind.blocks[b].flux);
      cert->justification = {"assumed PLP via --assume-plp"};
    } else {
      try {
        cert = certify_block_plp(d.subnetworks()[b], KineticOrderMatrix(subF));
      } catch (const std::invalid_argument&) {
        cert = std::nullopt;
      }
    }
    assumed.push_back(assume);
    json cj{{"block", block_labels(m.net, d.blocks()[b])},
            {"certified", cert.has_value()},
            {"assumed", assume}};
    if (cert) {
      cj["kind"] = "PLP";
      cj["dim_P"] = cert->P.dim();
      cj["justification"] = cert->justification;
    }
    cert_json.push_back(cj);
    certs.push_back(std::move(cert));
  }

  TheoremReport rep = corollary_check(m.net, m.F, d, certs, assumed);
  json checklist = json::array();
  for (const auto& c : rep.checklist)
    checklist.push_back({{"hypothesis", c.name}, {"passed", c.passed}, {"assumed", c.assumed}});
  json j{{"command", "plp"},
         {"blocks", blocks_json(m.net, d.blocks())},
         {"certificates", cert_json},
         {"checklist", checklist},
         {"applicable", rep.applicable}};
  if (rep.applicable && rep.P_E) {
    Subspace perp = orthogonal_complement(*rep.P_E);
    json basis = json::array();
    for (const auto& row : rep.P_E->basis()) {
      json v = json::array();
      for (const auto& x : row) v.push_back(x.str());
      basis.push_back(v);
    }
    j["P_E"] = {{"dim", rep.P_E->dim()}, {"basis", basis}};
    j["P_E_perp_dim"] = perp.dim();
    j["conclusion"] = rep.conclusion;

    if (m.rates) {
      // numeric spot check: find an equilibrium, sample the parametrization
      std::vector<std::vector<double>> guesses{std::vector<double>(m.net.num_species(), 1.0),
                                               std::vector<double>(m.net.num_species(), 0.5)};
      auto x_star = find_equilibrium_numeric(m.net, m.F, *m.rates, guesses);
      if (x_star) {
        LPCertificate whole(*rep.P_E);
        EquilibriaParametrization par(whole, *x_star);
        std::mt19937_64 rng(opt.seed);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
          auto x = par.sample(rng, 0.5);
          worst = std::max(worst, numeric::norm2(sfrf_eval(m.net, m.F, *m.rates, x)));
        }
        j["numeric_check"] = {{"reference_equilibrium", *x_star},
                              {"worst_sample_residual", worst}};
      }
    }
  }
  emit(opt, j);
  return rep.applicable ? kExitOk : kExitNegative;
}

int cmd_check_equilibrium(const Options& opt, const ParsedModel& m, const std::string& point_file) {
  if (!m.rates) throw std::runtime_error("check-equilibrium requires rate lines in the model");
  std::string text = slurp(point_file);
  std::vector<double> x(m.net.num_species(), -1.0);
  std::istringstream in(text);
  std::string raw;
  std::size_t no = 0;
  while (std::getline(in, raw)) {
    ++no;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::string sp;
    double val;
    if (!(ls >> sp)) continue;
    if (!(ls >> val)) throw std::runtime_error("point file line " + std::to_string(no) +
                                               ": expected '<species> <value>'");
    auto si = m.net.species_index(sp);
    if (!si) throw std::runtime_error("point file: unknown species '" + sp + "'");
    x[*si] = val;
  }
  for (std::size_t j = 0; j < x.size(); ++j)
    if (!(x[j] > 0.0))
      throw std::runtime_error("point file: species '" + m.net.species()[j] +
                               "' missing or nonpositive");
  double residual = numeric::norm2(sfrf_eval(m.net, m.F, *m.rates, x));
  bool ok = residual < 1e-8;
  emit(opt, json{{"command", "check-equilibrium"},
                 {"residual", residual},
                 {"is_equilibrium", ok}});
  return ok ? kExitOk : kExitNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crnkit: reaction network analysis with power-law kinetics"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.add_option("--seed", opt.seed, "Seed for numeric samplers")->capture_default_str();

  std::string file, mode = "exhaustive", dspec, point_file;
  std::size_t max_cycles = 10000, max_branches = 1000000;
  bool f_wr_cf = false, f_indep = false, f_indep_wr_cf = false;
  std::vector<std::string> assume_plp;

  auto* analyze = app.add_subcommand("analyze", "Structural summary and NF nodes");
  analyze->add_option("file", file)->required();
  auto* classify = app.add_subcommand("classify", "PL-RDK / PL-NDK classification");
  classify->add_option("file", file)->required();
  auto* decompose = app.add_subcommand("decompose", "Decomposition searches");
  decompose->add_option("file", file)->required();
  decompose->add_flag("--wr-cf", f_wr_cf, "Weakly reversible CF-decomposition search");
  decompose->add_flag("--independent", f_indep, "Finest independent decomposition");
  decompose->add_flag("--independent-wr-cf", f_indep_wr_cf,
                      "Independent weakly reversible CF-decomposition");
  decompose->add_option("--mode", mode)->check(CLI::IsMember({"greedy", "exhaustive"}));
  decompose->add_option("--max-cycles", max_cycles);
  decompose->add_option("--max-branches", max_branches);
  auto* kinetic = app.add_subcommand("kinetic-complexes", "Network of kinetic complexes");
  kinetic->add_option("file", file)->required();
  kinetic->add_option("--decomposition", dspec, "Decomposition file or 'auto'");
  auto* plp = app.add_subcommand("plp", "PLP certification pipeline");
  plp->add_option("file", file)->required();
  plp->add_option("--decomposition", dspec, "Decomposition file or 'auto'");
  plp->add_option("--assume-plp", assume_plp, "Blocks assumed PLP (blockN or first label)");
  auto* checkeq = app.add_subcommand("check-equilibrium", "Evaluate a candidate equilibrium");
  checkeq->add_option("file", file)->required();
  checkeq->add_option("--point", point_file)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    ParsedModel m = parse_crn(slurp(file));
    if (analyze->parsed()) return cmd_analyze(opt, m);
    if (classify->parsed()) return cmd_classify(opt, m);
    if (decompose->parsed()) {
      int chosen = int(f_wr_cf) + int(f_indep) + int(f_indep_wr_cf);
      if (chosen != 1) {
        std::cerr << "decompose: choose exactly one of --wr-cf, --independent, "
                     "--independent-wr-cf\n";
        return kExitInput;
      }
      if (f_wr_cf) return cmd_decompose_wr_cf(opt, m, mode, max_cycles, max_branches);
      if (f_indep) return cmd_decompose_independent(opt, m);
      return cmd_decompose_independent_wr_cf(opt, m);
    }
    if (kinetic->parsed()) return cmd_kinetic_complexes(opt, m, dspec);
    if (plp->parsed()) return cmd_plp(opt, m, dspec.empty() ? std::string("auto") : dspec,
                                      assume_plp);
    if (checkeq->parsed()) return cmd_check_equilibrium(opt, m, point_file);
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NetworkError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    // resolve_decomposition encodes analysis-negative/limit in its message path
    std::string msg = e.what();
    if (msg.find("automatic decomposition failed") != std::string::npos) return kExitNegative;
    return kExitInput;
  }
  return kExitInput;
}
