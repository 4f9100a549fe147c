#ifndef CRNKIT_KINETICS_HPP
#define CRNKIT_KINETICS_HPP

#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "crnkit/network.hpp"

namespace crnkit {

/// Kinetic order matrix F: row i holds the kinetic orders of reaction i,
/// one exact rational per species.
class KineticOrderMatrix {
 public:
  KineticOrderMatrix(std::size_t reactions, std::size_t species)
      : f_(reactions, species) {}
  explicit KineticOrderMatrix(Matrix f) : f_(std::move(f)) {}

  std::size_t num_reactions() const { return f_.rows(); }
  std::size_t num_species() const { return f_.cols(); }
  const Matrix& matrix() const { return f_; }
  Matrix& matrix() { return f_; }
  RVec row(std::size_t i) const { return f_.row(i); }

  void check_against(const Network& net) const {
    if (f_.rows() != net.num_reactions() || f_.cols() != net.num_species())
      throw std::invalid_argument("kinetic order matrix does not match network dimensions");
  }

 private:
  Matrix f_;
};

struct RateVector {
  std::vector<double> k;
};

/// CF-subsets of one reactant complex: branching reactions grouped by exact
/// equality of their kinetic order rows, groups ordered by smallest member.
struct ReactantNodeClass {
  std::size_t complex_idx = 0;
  std::vector<std::size_t> branching_reactions;           // R(y), ascending
  std::vector<std::vector<std::size_t>> cf_subsets;       // partition of R(y)
  bool is_nf() const { return cf_subsets.size() > 1; }
  std::size_t n_r() const { return cf_subsets.size(); }   // N_R(y)
};

struct NFClassification {
  std::vector<ReactantNodeClass> reactants;  // one entry per reactant complex

  const ReactantNodeClass* find(std::size_t complex_idx) const {
    for (const auto& rc : reactants)
      if (rc.complex_idx == complex_idx) return &rc;
    return nullptr;
  }
  std::vector<std::size_t> nf_nodes() const {
    std::vector<std::size_t> out;
    for (const auto& rc : reactants)
      if (rc.is_nf()) out.push_back(rc.complex_idx);
    return out;
  }
};

enum class KineticsClass { PL_RDK, PL_NDK };

struct SystemClass {
  KineticsClass kind = KineticsClass::PL_RDK;
  bool mass_action = false;             // F-rows equal reactant stoichiometry
  bool factor_span_surjective = false;  // reactant kinetic-order rows pairwise
                                        // distinct across distinct reactants
};

inline NFClassification classify_nodes(const Network& net, const KineticOrderMatrix& F) {
  F.check_against(net);
  std::map<std::size_t, std::vector<std::size_t>> by_reactant;
  for (std::size_t q = 0; q < net.num_reactions(); ++q)
    by_reactant[net.reaction(q).reactant].push_back(q);
  NFClassification out;
  for (const auto& [y, rxns] : by_reactant) {
    ReactantNodeClass rc;
    rc.complex_idx = y;
    rc.branching_reactions = rxns;
    for (std::size_t q : rxns) {
      RVec row = F.row(q);
      bool placed = false;
      for (auto& grp : rc.cf_subsets) {
        if (F.row(grp.front()) == row) {
          grp.push_back(q);
          placed = true;
          break;
        }
      }
      if (!placed) rc.cf_subsets.push_back({q});
    }
    out.reactants.push_back(std::move(rc));
  }
  return out;
}

inline SystemClass classify_system(const Network& net, const KineticOrderMatrix& F) {
  NFClassification nodes = classify_nodes(net, F);
  SystemClass sc;
  sc.kind = nodes.nf_nodes().empty() ? KineticsClass::PL_RDK : KineticsClass::PL_NDK;

  sc.mass_action = true;
  for (std::size_t q = 0; q < net.num_reactions() && sc.mass_action; ++q)
    if (F.row(q) != net.complexes()[net.reaction(q).reactant]) sc.mass_action = false;

  // rows at distinct reactants pairwise distinct (meaningful for PL-RDK,
  // where it is factor span surjectivity)
  sc.factor_span_surjective = true;
  for (std::size_t a = 0; a < nodes.reactants.size() && sc.factor_span_surjective; ++a)
    for (std::size_t b = a + 1; b < nodes.reactants.size() && sc.factor_span_surjective; ++b)
      for (std::size_t qa : nodes.reactants[a].branching_reactions) {
        bool clash = false;
        for (std::size_t qb : nodes.reactants[b].branching_reactions)
          if (F.row(qa) == F.row(qb)) { clash = true; break; }
        if (clash) { sc.factor_span_surjective = false; break; }
      }
  return sc;
}

inline double power_law_term(const KineticOrderMatrix& F, std::size_t q,
                             const std::vector<double>& x) {
  double acc = 0.0;  // exponent-space product: exp(sum F_qj * log x_j)
  for (std::size_t j = 0; j < x.size(); ++j) {
    double fqj = F.matrix()(q, j).to_double();
    if (fqj != 0.0) acc += fqj * std::log(x[j]);
  }
  return std::exp(acc);
}

/// Species formation rate f(x) = sum_q k_q x^{F_q} (product_q - reactant_q).
inline std::vector<double> sfrf_eval(const Network& net, const KineticOrderMatrix& F,
                                     const RateVector& k, const std::vector<double>& x) {
  F.check_against(net);
  if (k.k.size() != net.num_reactions()) throw std::invalid_argument("sfrf_eval: rate vector size");
  if (x.size() != net.num_species()) throw std::invalid_argument("sfrf_eval: state size");
  for (double xi : x)
    if (!(xi > 0.0)) throw std::domain_error("sfrf_eval: state must be strictly positive");
  std::vector<double> f(net.num_species(), 0.0);
  for (std::size_t q = 0; q < net.num_reactions(); ++q) {
    double rate = k.k[q] * power_law_term(F, q, x);
    const RVec& prod = net.complexes()[net.reaction(q).product];
    const RVec& reac = net.complexes()[net.reaction(q).reactant];
    for (std::size_t j = 0; j < f.size(); ++j)
      f[j] += rate * (prod[j].to_double() - reac[j].to_double());
  }
  return f;
}

/// Complex formation rate g(x) = I_a diag(k) rho' Psi_K(x) for PL-RDK
/// systems, indexed over complexes. Throws on PL-NDK input (no factor map).
inline std::vector<double> cfr_eval(const Network& net, const KineticOrderMatrix& F,
                                    const RateVector& k, const std::vector<double>& x) {
  if (classify_system(net, F).kind != KineticsClass::PL_RDK)
    throw std::domain_error("cfr_eval: system is PL-NDK, factor map undefined");
  for (double xi : x)
    if (!(xi > 0.0)) throw std::domain_error("cfr_eval: state must be strictly positive");
  std::vector<double> g(net.num_complexes(), 0.0);
  for (std::size_t q = 0; q < net.num_reactions(); ++q) {
    double rate = k.k[q] * power_law_term(F, q, x);
    g[net.reaction(q).reactant] -= rate;
    g[net.reaction(q).product] += rate;
  }
  return g;
}

}  // namespace crnkit

#endif  // CRNKIT_KINETICS_HPP
