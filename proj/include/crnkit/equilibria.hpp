#ifndef CRNKIT_EQUILIBRIA_HPP
#define CRNKIT_EQUILIBRIA_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "crnkit/decomposition.hpp"
#include "crnkit/kinetic_complexes.hpp"
#include "crnkit/kinetics.hpp"
#include "crnkit/network.hpp"
#include "crnkit/subspace.hpp"
#include "crnkit/wr_cf.hpp"

namespace crnkit {

enum class LPKind { PLP, CLP, biLP };

/// Log-parametrization certificate: the positive equilibria form
/// E+ = { x : log x - log x* lies in the orthogonal complement of P }.
struct LPCertificate {
  LPKind kind = LPKind::PLP;
  Subspace P;  // P_E (or P_Z)
  std::vector<double> reference_equilibrium;  // optional, empty when not computed
  std::vector<std::string> justification;

  explicit LPCertificate(Subspace p) : P(std::move(p)) {}
};

struct HypothesisCheck {
  std::string name;
  bool passed = false;
  bool assumed = false;  // supplied externally rather than derived
};

struct TheoremReport {
  bool applicable = false;
  std::vector<HypothesisCheck> checklist;
  std::optional<Subspace> P_E;
  std::string conclusion;
};

/// Sufficient-condition PLP certification of a single block: weakly
/// reversible, zero deficiency, and zero kinetic-complex deficiency imply
/// the block is PLP with P equal to its kinetic flux subspace. Absence of a
/// certificate never claims the block is not PLP.
inline std::optional<LPCertificate> certify_block_plp(const Network& block,
                                                      const KineticOrderMatrix& F) {
  F.check_against(block);
  if (classify_system(block, F).kind != KineticsClass::PL_RDK)
    throw std::invalid_argument("certify_block_plp: block must be PL-RDK");
  NetworkSummary s = block.summarize();
  if (!s.weakly_reversible || s.delta != 0) return std::nullopt;
  if (!cycle_terminal(block)) return std::nullopt;
  KineticComplexNetwork kn = kinetic_network(block, F);
  if (kn.delta_tilde != 0) return std::nullopt;
  LPCertificate cert(kn.flux);
  cert.justification = {
      "block weakly reversible",
      "block deficiency zero",
      "kinetic-complex deficiency zero (complex balancing trigger)",
      "therefore PLP with P equal to the kinetic flux subspace"};
  return cert;
}

namespace detail {

inline void append_check(TheoremReport& rep, std::string name, bool passed, bool assumed = false) {
  rep.checklist.push_back({std::move(name), passed, assumed});
}

}  // namespace detail

/// The main parametrization theorem: for a weakly reversible PL-RDK
/// decomposition that is bi-level independent with every block PLP-certified
/// via P_i equal to its kinetic flux subspace, the whole system is PLP with
/// P_E equal to the sum of the block flux subspaces.
inline TheoremReport apply_main_theorem(const Network& net, const KineticOrderMatrix& F,
                                        const Decomposition& d,
                                        const std::vector<std::optional<LPCertificate>>& certs,
                                        const std::vector<bool>& assumed = {}) {
  F.check_against(net);
  TheoremReport rep;

  VerifyResult wr = verify_wr_cf(net, F, d.blocks());
  detail::append_check(rep, "decomposition weakly reversible and CF", wr.ok);

  bool all_rdk = true;
  for (std::size_t b = 0; b < d.num_blocks(); ++b) {
    const auto& idx = d.blocks()[b];
    Matrix subF(idx.size(), F.num_species());
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < F.num_species(); ++j) subF(i, j) = F.matrix()(idx[i], j);
    if (classify_system(d.subnetworks()[b], KineticOrderMatrix(subF)).kind != KineticsClass::PL_RDK)
      all_rdk = false;
  }
  detail::append_check(rep, "every block PL-RDK", all_rdk);

  InducedDecomposition ind = induced_decomposition(net, F, d);
  detail::append_check(rep, "bi-level independent", ind.bi_level_independent);

  bool all_plp = certs.size() == d.num_blocks();
  for (std::size_t b = 0; b < certs.size() && all_plp; ++b) {
    if (!certs[b].has_value()) {
      all_plp = false;
      break;
    }
    // P_{E,i} must equal the block's kinetic flux subspace
    if (b < ind.blocks.size() && !(certs[b]->P == ind.blocks[b].flux)) all_plp = false;
  }
  bool any_assumed = false;
  for (bool a : assumed) any_assumed = any_assumed || a;
  detail::append_check(rep, "every block PLP with P equal to its kinetic flux subspace", all_plp,
                       any_assumed);

  rep.applicable = wr.ok && all_rdk && ind.bi_level_independent && all_plp;
  if (rep.applicable) {
    Subspace pe(net.num_species());
    for (const auto& kn : ind.blocks) pe = subspace_sum(pe, kn.flux);
    rep.P_E = pe;
    rep.conclusion = "system is weakly reversible PLP with P_E the sum of block kinetic flux "
                     "subspaces (dim " + std::to_string(pe.dim()) + ")";
  }
  return rep;
}

/// Corollary form: bi-level independence is derived from independence of the
/// decomposition plus dim S_i = dim S~_i per block.
inline TheoremReport corollary_check(const Network& net, const KineticOrderMatrix& F,
                                     const Decomposition& d,
                                     const std::vector<std::optional<LPCertificate>>& certs,
                                     const std::vector<bool>& assumed = {}) {
  TheoremReport rep = apply_main_theorem(net, F, d, certs, assumed);
  // replace the bi-level hypothesis with its derivation
  DecompositionProfile dp = profile(net, d);
  InducedDecomposition ind = induced_decomposition(net, F, d);
  bool dims = true;
  for (std::size_t b = 0; b < d.num_blocks(); ++b)
    if (d.subspaces()[b].dim() != ind.blocks[b].s_tilde) dims = false;
  for (auto& c : rep.checklist)
    if (c.name == "bi-level independent") {
      c.name = "independent with dim S_i = dim S~_i per block (implies bi-level independent)";
      c.passed = dp.independent && dims;
    }
  bool all = true;
  for (const auto& c : rep.checklist) all = all && c.passed;
  if (all != rep.applicable) {
    rep.applicable = all;
    if (!all) {
      rep.P_E.reset();
      rep.conclusion.clear();
    }
  }
  return rep;
}

namespace numeric {

/// Solves A x = b with partial pivoting; A is n x n row-major. Returns
/// false on (near-)singular pivot.
inline bool solve_dense(std::vector<double> a, std::vector<double> b, std::size_t n,
                        std::vector<double>& x) {
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < n; ++i)
      if (std::fabs(a[i * n + c]) > std::fabs(a[piv * n + c])) piv = i;
    if (std::fabs(a[piv * n + c]) < 1e-14) return false;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[c * n + j], a[piv * n + j]);
      std::swap(b[c], b[piv]);
    }
    for (std::size_t i = c + 1; i < n; ++i) {
      double f = a[i * n + c] / a[c * n + c];
      for (std::size_t j = c; j < n; ++j) a[i * n + j] -= f * a[c * n + j];
      b[i] -= f * b[c];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i * n + j] * x[j];
    x[i] = s / a[i * n + i];
  }
  return true;
}

inline double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace numeric

/// Distance-based membership and sampling for a log-parametrized set
/// E+ = { x : log x - log x* ∈ P^⊥ }.
class EquilibriaParametrization {
 public:
  EquilibriaParametrization(const LPCertificate& cert, std::vector<double> x_star)
      : x_star_(std::move(x_star)) {
    if (x_star_.size() != cert.P.ambient_dim())
      throw std::invalid_argument("parametrize_equilibria: dimension mismatch");
    for (double v : x_star_)
      if (!(v > 0.0)) throw std::invalid_argument("parametrize_equilibria: x* must be positive");
    Subspace perp = orthogonal_complement(cert.P);
    for (const auto& row : perp.basis()) {
      std::vector<double> b(row.size());
      for (std::size_t j = 0; j < row.size(); ++j) b[j] = row[j].to_double();
      perp_basis_.push_back(std::move(b));
    }
  }

  /// True iff log x - log x* lies in P^⊥ up to `tol` (least-squares
  /// projection residual onto the complement basis).
  bool membership(const std::vector<double>& x, double tol = 1e-9) const {
    if (x.size() != x_star_.size())
      throw std::invalid_argument("membership: dimension mismatch");
    std::vector<double> v(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (!(x[j] > 0.0)) throw std::invalid_argument("membership: x must be positive");
      v[j] = std::log(x[j]) - std::log(x_star_[j]);
    }
    std::vector<double> res = project_out(v);
    return numeric::norm2(res) <= tol;
  }

  /// x = exp(log x* + v) with v a random combination of the P^⊥ basis,
  /// coefficients uniform in [-scale, scale].
  std::vector<double> sample(std::mt19937_64& rng, double scale = 1.0) const {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<double> x(x_star_.size());
    std::vector<double> v(x_star_.size(), 0.0);
    for (const auto& b : perp_basis_) {
      double c = u(rng);
      for (std::size_t j = 0; j < v.size(); ++j) v[j] += c * b[j];
    }
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = std::exp(std::log(x_star_[j]) + v[j]);
    return x;
  }

  std::size_t complement_dim() const { return perp_basis_.size(); }

 private:
  // residual of v after removing its best approximation in span(perp_basis_)
  std::vector<double> project_out(std::vector<double> v) const {
    const std::size_t k = perp_basis_.size();
    if (k == 0) return v;
    std::vector<double> g(k * k, 0.0), rhs(k, 0.0), c;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t t = 0; t < v.size(); ++t) g[i * k + j] += perp_basis_[i][t] * perp_basis_[j][t];
      for (std::size_t t = 0; t < v.size(); ++t) rhs[i] += perp_basis_[i][t] * v[t];
    }
    if (!numeric::solve_dense(g, rhs, k, c)) return v;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t t = 0; t < v.size(); ++t) v[t] -= c[i] * perp_basis_[i][t];
    return v;
  }

  std::vector<double> x_star_;
  std::vector<std::vector<double>> perp_basis_;
};

/// Damped (Levenberg-style) Newton iteration on f(exp z) = 0 in log
/// coordinates. Returns the first positive root with residual below
/// `residual_tol`, trying each initial guess in turn; never reports a point
/// that does not meet the tolerance.
inline std::optional<std::vector<double>> find_equilibrium_numeric(
    const Network& net, const KineticOrderMatrix& F, const RateVector& k,
    const std::vector<std::vector<double>>& guesses, double residual_tol = 1e-10,
    std::size_t max_iter = 300) {
  F.check_against(net);
  const std::size_t m = net.num_species();
  const std::size_t r = net.num_reactions();

  std::vector<std::vector<double>> nmat(m, std::vector<double>(r));
  std::vector<std::vector<double>> fmat(r, std::vector<double>(m));
  for (std::size_t q = 0; q < r; ++q) {
    const RVec& prod = net.complexes()[net.reaction(q).product];
    const RVec& reac = net.complexes()[net.reaction(q).reactant];
    for (std::size_t j = 0; j < m; ++j) {
      nmat[j][q] = prod[j].to_double() - reac[j].to_double();
      fmat[q][j] = F.matrix()(q, j).to_double();
    }
  }
  auto eval = [&](const std::vector<double>& z, std::vector<double>& f,
                  std::vector<double>* jac) {
    f.assign(m, 0.0);
    if (jac) jac->assign(m * m, 0.0);
    for (std::size_t q = 0; q < r; ++q) {
      double e = 0.0;
      for (std::size_t j = 0; j < m; ++j) e += fmat[q][j] * z[j];
      double rate = k.k[q] * std::exp(e);
      for (std::size_t j = 0; j < m; ++j) {
        f[j] += rate * nmat[j][q];
        if (jac)
          for (std::size_t l = 0; l < m; ++l) (*jac)[j * m + l] += rate * nmat[j][q] * fmat[q][l];
      }
    }
  };

  for (const auto& guess : guesses) {
    if (guess.size() != m) throw std::invalid_argument("find_equilibrium_numeric: guess size");
    std::vector<double> z(m);
    bool ok = true;
    for (std::size_t j = 0; j < m; ++j) {
      if (!(guess[j] > 0.0)) { ok = false; break; }
      z[j] = std::log(guess[j]);
    }
    if (!ok) continue;

    double lambda = 1e-6;
    std::vector<double> f, jac;
    eval(z, f, &jac);
    double fn = numeric::norm2(f);
    for (std::size_t it = 0; it < max_iter && fn >= residual_tol; ++it) {
      // normal equations (J^T J + lambda I) d = -J^T f
      std::vector<double> a(m * m, 0.0), rhs(m, 0.0), d;
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j)
          for (std::size_t t = 0; t < m; ++t) a[i * m + j] += jac[t * m + i] * jac[t * m + j];
        a[i * m + i] += lambda;
        for (std::size_t t = 0; t < m; ++t) rhs[i] -= jac[t * m + i] * f[t];
      }
      if (!numeric::solve_dense(a, rhs, m, d)) {
        lambda *= 10.0;
        continue;
      }
      std::vector<double> z2(m);
      for (std::size_t j = 0; j < m; ++j) z2[j] = z[j] + d[j];
      std::vector<double> f2;
      eval(z2, f2, nullptr);
      double fn2 = numeric::norm2(f2);
      if (fn2 < fn) {
        z = std::move(z2);
        eval(z, f, &jac);
        fn = numeric::norm2(f);
        lambda = std::max(lambda * 0.3, 1e-12);
      } else {
        lambda *= 10.0;
        if (lambda > 1e12) break;
      }
    }
    if (fn < residual_tol) {
      std::vector<double> x(m);
      for (std::size_t j = 0; j < m; ++j) x[j] = std::exp(z[j]);
      return x;
    }
  }
  return std::nullopt;
}

/// Residual of the block-restricted species formation rate at x.
inline double block_residual(const Network& net, const KineticOrderMatrix& F, const RateVector& k,
                             const std::vector<std::size_t>& block, const std::vector<double>& x) {
  std::vector<double> f(net.num_species(), 0.0);
  for (std::size_t q : block) {
    double rate = k.k[q] * power_law_term(F, q, x);
    const RVec& prod = net.complexes()[net.reaction(q).product];
    const RVec& reac = net.complexes()[net.reaction(q).reactant];
    for (std::size_t j = 0; j < f.size(); ++j)
      f[j] += rate * (prod[j].to_double() - reac[j].to_double());
  }
  return numeric::norm2(f);
}

struct EquilibriaRelationReport {
  bool inclusion_ok = true;   // block equilibria intersect into net equilibria
  bool equality_ok = true;    // under independence: net equilibria split per block
  double worst_net_residual = 0.0;
  double worst_block_residual = 0.0;
};

/// Feinberg-style relation check on sample points: any point equilibrating
/// every block must equilibrate the network; when the decomposition is
/// independent, network equilibria must equilibrate every block.
inline EquilibriaRelationReport equilibria_relation_check(
    const Network& net, const KineticOrderMatrix& F, const RateVector& k, const Decomposition& d,
    const std::vector<std::vector<double>>& points, double tol = 1e-8) {
  EquilibriaRelationReport rep;
  bool independent = profile(net, d).independent;
  for (const auto& x : points) {
    std::vector<double> blocks_res;
    for (const auto& b : d.blocks()) blocks_res.push_back(block_residual(net, F, k, b, x));
    double maxb = 0.0;
    for (double v : blocks_res) maxb = std::max(maxb, v);
    std::vector<double> f = sfrf_eval(net, F, k, x);
    double fn = numeric::norm2(f);
    if (maxb < tol) {
      rep.worst_net_residual = std::max(rep.worst_net_residual, fn);
      // residual of the union is at most the sum of block residuals
      if (fn > d.num_blocks() * tol) rep.inclusion_ok = false;
    }
    if (independent && fn < tol) {
      rep.worst_block_residual = std::max(rep.worst_block_residual, maxb);
      if (maxb > 10 * tol) rep.equality_ok = false;
    }
  }
  return rep;
}

}  // namespace crnkit

#endif  // CRNKIT_EQUILIBRIA_HPP
