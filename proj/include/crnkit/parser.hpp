#ifndef CRNKIT_PARSER_HPP
#define CRNKIT_PARSER_HPP

#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "crnkit/kinetics.hpp"
#include "crnkit/network.hpp"

namespace crnkit {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t col, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(col) +
                           ": " + message),
        line_(line),
        col_(col) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return col_; }

 private:
  std::size_t line_, col_;
};

struct NamedBlock {
  std::string name;
  std::vector<std::string> reaction_labels;
};

/// Parsed .crn document: network, kinetic order matrix, optional rates
/// (present only when every reaction has a rate line), optional named
/// decomposition blocks.
struct ParsedModel {
  Network net;
  KineticOrderMatrix F;
  std::optional<RateVector> rates;
  std::vector<NamedBlock> blocks;
};

namespace detail {

struct Cursor {
  const std::string& text;
  std::size_t pos = 0;
  std::size_t line;

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= text.size();
  }
  std::size_t col() const { return pos + 1; }
  char peek() const { return pos < text.size() ? text[pos] : '\0'; }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line, pos + 1, msg); }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c, const std::string& what) {
    if (!eat(c)) fail("expected '" + std::string(1, c) + "' " + what);
  }
  std::string identifier() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                 text[pos] == '_' || text[pos] == '\''))
      ++pos;
    if (pos == start) fail("expected an identifier");
    return text.substr(start, pos - start);
  }
  std::string number() {
    skip_ws();
    std::size_t start = pos;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
    while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) ||
                                 text[pos] == '.' || text[pos] == '/'))
      ++pos;
    if (pos == start) fail("expected a number");
    return text.substr(start, pos - start);
  }
  Rational rational() {
    std::size_t at = pos;
    std::string tok = number();
    try {
      return Rational::parse(tok);
    } catch (const std::exception& e) {
      pos = at;
      fail(e.what());
    }
  }
};

struct RawReaction {
  std::string label;
  std::map<std::string, Rational> reactant, product;  // species -> coefficient
  std::size_t line;
};

// combo := '0' | term ('+' term)*; term := [coefficient] species
inline std::map<std::string, Rational> parse_combo(Cursor& c) {
  std::map<std::string, Rational> combo;
  c.skip_ws();
  if (c.peek() == '0' &&
      !(c.pos + 1 < c.text.size() && (std::isalnum(static_cast<unsigned char>(c.text[c.pos + 1])) ||
                                      c.text[c.pos + 1] == '.' || c.text[c.pos + 1] == '/'))) {
    ++c.pos;
    return combo;  // zero complex
  }
  for (;;) {
    c.skip_ws();
    Rational coeff(1);
    if (std::isdigit(static_cast<unsigned char>(c.peek())) || c.peek() == '.') coeff = c.rational();
    std::string sp = c.identifier();
    if (coeff.sign() < 0) c.fail("negative coefficient for species '" + sp + "'");
    auto [it, fresh] = combo.emplace(sp, coeff);
    if (!fresh) it->second += coeff;
    if (!c.eat('+')) break;
  }
  return combo;
}

}  // namespace detail

inline ParsedModel parse_crn(const std::string& text) {
  // split into logical lines, dropping comments
  std::vector<std::pair<std::size_t, std::string>> lines;
  {
    std::istringstream in(text);
    std::string raw;
    std::size_t no = 0;
    while (std::getline(in, raw)) {
      ++no;
      auto hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
      std::size_t a = raw.find_first_not_of(" \t\r");
      if (a == std::string::npos) continue;
      std::size_t b = raw.find_last_not_of(" \t\r");
      lines.emplace_back(no, raw.substr(a, b - a + 1));
    }
  }

  std::vector<std::string> species;
  auto species_seen = [&](const std::string& id) {
    for (const auto& s : species)
      if (s == id) return true;
    return false;
  };
  std::vector<detail::RawReaction> raw_rxns;
  std::map<std::string, std::pair<std::size_t, std::map<std::string, Rational>>> kinetics_lines;
  std::map<std::string, std::pair<std::size_t, double>> rate_lines;
  std::vector<NamedBlock> blocks;

  for (const auto& [no, body] : lines) {
    detail::Cursor c{body, 0, no};
    std::string kw = c.identifier();
    if (kw == "species") {
      while (!c.done()) {
        std::string id = c.identifier();
        if (species_seen(id)) c.fail("duplicate species '" + id + "'");
        species.push_back(id);
      }
    } else if (kw == "reaction") {
      detail::RawReaction r;
      r.line = no;
      r.label = c.identifier();
      c.expect(':', "after reaction label");
      r.reactant = detail::parse_combo(c);
      c.skip_ws();
      if (c.text.compare(c.pos, 2, "->") != 0) c.fail("expected '->'");
      c.pos += 2;
      r.product = detail::parse_combo(c);
      if (!c.done()) c.fail("trailing input after reaction");
      for (const auto& rx : raw_rxns)
        if (rx.label == r.label) c.fail("duplicate reaction label '" + r.label + "'");
      raw_rxns.push_back(std::move(r));
    } else if (kw == "kinetics") {
      std::string label = c.identifier();
      c.expect(':', "after kinetics label");
      std::map<std::string, Rational> orders;
      if (!c.done()) {
        for (;;) {
          std::string sp = c.identifier();
          c.expect('=', "after species in kinetics");
          Rational val = c.rational();
          if (!orders.emplace(sp, val).second) c.fail("duplicate species '" + sp + "' in kinetics");
          if (!c.eat(',')) break;
        }
        if (!c.done()) c.fail("trailing input after kinetics");
      }
      if (!kinetics_lines.emplace(label, std::make_pair(no, std::move(orders))).second)
        c.fail("duplicate kinetics for reaction '" + label + "'");
    } else if (kw == "rate") {
      std::string label = c.identifier();
      c.expect(':', "after rate label");
      Rational v = c.rational();
      if (v.sign() <= 0) c.fail("rate must be positive");
      if (!c.done()) c.fail("trailing input after rate");
      if (!rate_lines.emplace(label, std::make_pair(no, v.to_double())).second)
        c.fail("duplicate rate for reaction '" + label + "'");
    } else if (kw == "block") {
      NamedBlock b;
      b.name = c.identifier();
      c.expect(':', "after block name");
      for (;;) {
        b.reaction_labels.push_back(c.identifier());
        if (!c.eat(',')) break;
      }
      if (!c.done()) c.fail("trailing input after block");
      blocks.push_back(std::move(b));
    } else {
      detail::Cursor err{body, 0, no};
      err.fail("unknown directive '" + kw + "'");
    }
  }

  if (raw_rxns.empty()) throw ParseError(1, 1, "document declares no reactions");

  // species order: declared first, then first appearance in reactions
  for (const auto& r : raw_rxns)
    for (const auto* combo : {&r.reactant, &r.product})
      for (const auto& [sp, coeff] : *combo)
        if (!species_seen(sp)) species.push_back(sp);

  auto to_vec = [&](const std::map<std::string, Rational>& combo) {
    RVec v(species.size());
    for (const auto& [sp, coeff] : combo)
      for (std::size_t i = 0; i < species.size(); ++i)
        if (species[i] == sp) v[i] = coeff;
    return v;
  };

  std::vector<RVec> complexes;
  auto complex_index = [&](const RVec& v) {
    for (std::size_t i = 0; i < complexes.size(); ++i)
      if (complexes[i] == v) return i;
    complexes.push_back(v);
    return complexes.size() - 1;
  };
  std::vector<Reaction> reactions;
  for (const auto& r : raw_rxns) {
    std::size_t re = complex_index(to_vec(r.reactant));
    std::size_t pr = complex_index(to_vec(r.product));
    if (re == pr) throw ParseError(r.line, 1, "reaction '" + r.label + "' is a self-loop");
    reactions.push_back({r.label, re, pr});
  }
  Network net = [&]() {
    try {
      return build_network(species, complexes, reactions);
    } catch (const NetworkError& e) {
      throw ParseError(1, 1, e.what());
    }
  }();

  // kinetic orders: explicit line, or mass-action default (reactant row)
  Matrix f(net.num_reactions(), net.num_species());
  for (std::size_t q = 0; q < net.num_reactions(); ++q) {
    auto it = kinetics_lines.find(net.reaction(q).label);
    if (it == kinetics_lines.end()) {
      RVec row = net.complexes()[net.reaction(q).reactant];
      for (std::size_t j = 0; j < row.size(); ++j) f(q, j) = row[j];
      continue;
    }
    const auto& [line_no, orders] = it->second;
    for (const auto& [sp, val] : orders) {
      auto si = net.species_index(sp);
      if (!si) throw ParseError(line_no, 1, "kinetics references unknown species '" + sp + "'");
      f(q, *si) = val;
    }
  }
  for (const auto& [label, entry] : kinetics_lines)
    if (!net.reaction_index(label))
      throw ParseError(entry.first, 1, "kinetics references unknown reaction '" + label + "'");
  for (const auto& [label, entry] : rate_lines)
    if (!net.reaction_index(label))
      throw ParseError(entry.first, 1, "rate references unknown reaction '" + label + "'");
  for (const auto& b : blocks)
    for (const auto& label : b.reaction_labels)
      if (!net.reaction_index(label))
        throw ParseError(1, 1, "block '" + b.name + "' references unknown reaction '" + label + "'");

  std::optional<RateVector> rates;
  if (!rate_lines.empty()) {
    if (rate_lines.size() != net.num_reactions())
      throw ParseError(rate_lines.begin()->second.first, 1,
                       "rate lines must cover every reaction or be absent");
    RateVector rv;
    rv.k.resize(net.num_reactions());
    for (std::size_t q = 0; q < net.num_reactions(); ++q)
      rv.k[q] = rate_lines.at(net.reaction(q).label).second;
    rates = std::move(rv);
  }

  return ParsedModel{std::move(net), KineticOrderMatrix(std::move(f)), std::move(rates),
                     std::move(blocks)};
}

inline std::string render_combo(const Network& net, std::size_t complex_idx) {
  const RVec& v = net.complexes()[complex_idx];
  std::string out;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (v[j].is_zero()) continue;
    if (!out.empty()) out += " + ";
    if (v[j] != Rational(1)) out += v[j].str() + " ";
    out += net.species()[j];
  }
  return out.empty() ? "0" : out;
}

/// Canonical document text; parse(render(m)) reproduces the same model.
inline std::string render_crn(const ParsedModel& m) {
  std::string out = "species";
  for (const auto& s : m.net.species()) out += " " + s;
  out += "\n";
  for (std::size_t q = 0; q < m.net.num_reactions(); ++q) {
    const Reaction& r = m.net.reaction(q);
    out += "reaction " + r.label + ": " + render_combo(m.net, r.reactant) + " -> " +
           render_combo(m.net, r.product) + "\n";
  }
  for (std::size_t q = 0; q < m.net.num_reactions(); ++q) {
    out += "kinetics " + m.net.reaction(q).label + ":";
    bool first = true;
    for (std::size_t j = 0; j < m.net.num_species(); ++j) {
      const Rational& v = m.F.matrix()(q, j);
      if (v.is_zero()) continue;
      out += (first ? " " : ", ") + m.net.species()[j] + "=" + v.str();
      first = false;
    }
    out += "\n";
  }
  if (m.rates) {
    std::ostringstream os;
    for (std::size_t q = 0; q < m.net.num_reactions(); ++q) {
      os << "rate " << m.net.reaction(q).label << ": " << m.rates->k[q] << "\n";
    }
    out += os.str();
  }
  for (const auto& b : m.blocks) {
    out += "block " + b.name + ":";
    for (std::size_t i = 0; i < b.reaction_labels.size(); ++i)
      out += (i ? ", " : " ") + b.reaction_labels[i];
    out += "\n";
  }
  return out;
}

}  // namespace crnkit

#endif  // CRNKIT_PARSER_HPP
