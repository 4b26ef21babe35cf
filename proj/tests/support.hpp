#pragma once

// Test-side generators and brute-force oracles. Nothing here calls into the
// library's evaluator, model enumerator or rank code.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace testsupport {

using Eval = std::function<bool(std::uint64_t)>;

struct GenFormula {
  std::string text;
  Eval eval;
};

inline std::vector<std::string> atom_names(std::size_t n) {
  static const char* pool[] = {"a", "b", "c", "d", "e", "f", "g", "h"};
  return std::vector<std::string>(pool, pool + n);
}

inline std::size_t pick(std::mt19937_64& rng, std::size_t bound) {
  return static_cast<std::size_t>(rng() % bound);
}

// Fully parenthesised, so the text never depends on precedence rules.
inline GenFormula random_formula(std::mt19937_64& rng, std::size_t atoms, int depth) {
  const auto names = atom_names(atoms);
  if (depth == 0 || pick(rng, 4) == 0) {
    const std::size_t roll = pick(rng, atoms + 2);
    if (roll == atoms) return {"TRUE", [](std::uint64_t) { return true; }};
    if (roll == atoms + 1) return {"FALSE", [](std::uint64_t) { return false; }};
    return {names[roll], [roll](std::uint64_t w) { return ((w >> roll) & 1U) != 0; }};
  }
  const std::size_t op = pick(rng, 5);
  if (op == 0) {
    auto f = random_formula(rng, atoms, depth - 1);
    return {"!(" + f.text + ")", [g = f.eval](std::uint64_t w) { return !g(w); }};
  }
  auto l = random_formula(rng, atoms, depth - 1);
  auto r = random_formula(rng, atoms, depth - 1);
  const std::string lt = "(" + l.text + ")";
  const std::string rt = "(" + r.text + ")";
  switch (op) {
    case 1:
      return {lt + " & " + rt, [a = l.eval, b = r.eval](std::uint64_t w) { return a(w) && b(w); }};
    case 2:
      return {lt + " | " + rt, [a = l.eval, b = r.eval](std::uint64_t w) { return a(w) || b(w); }};
    case 3:
      return {lt + " -> " + rt, [a = l.eval, b = r.eval](std::uint64_t w) { return !a(w) || b(w); }};
    default:
      return {lt + " <-> " + rt, [a = l.eval, b = r.eval](std::uint64_t w) { return a(w) == b(w); }};
  }
}

// Rule S -> h with nonempty S not containing h.
inline GenFormula random_rule(std::mt19937_64& rng, std::size_t atoms) {
  const auto names = atom_names(atoms);
  const std::size_t head = pick(rng, atoms);
  std::uint64_t body = 0;
  while (body == 0) {
    body = rng() & ((std::uint64_t{1} << atoms) - 1) & ~(std::uint64_t{1} << head);
    if (atoms == 1) break;
  }
  std::string text;
  for (std::size_t a = 0; a < atoms; ++a) {
    if ((body >> a) & 1U) text += (text.empty() ? "" : " & ") + names[a];
  }
  if (text.empty()) text = "TRUE";
  text += " -> " + names[head];
  return {text, [body, head](std::uint64_t w) { return (w & body) != body || ((w >> head) & 1U); }};
}

struct GenKB {
  std::string text;
  std::vector<Eval> formulas;  // formulas or strata, in order
  std::size_t atoms = 0;
};

inline std::string header(std::size_t atoms) {
  std::string out = "atoms:";
  for (const auto& n : atom_names(atoms)) out += " " + n;
  return out + "\n";
}

// Mix of Horn rules and arbitrary formulas.
inline GenKB random_kb(std::mt19937_64& rng, std::size_t atoms, std::size_t max_formulas) {
  GenKB kb;
  kb.atoms = atoms;
  kb.text = header(atoms);
  const std::size_t count = pick(rng, max_formulas + 1);
  for (std::size_t i = 0; i < count; ++i) {
    if (pick(rng, 3) != 0) {
      auto r = random_rule(rng, atoms);
      kb.text += "rule: " + r.text + "\n";
      kb.formulas.push_back(r.eval);
    } else {
      auto f = random_formula(rng, atoms, 3);
      kb.text += "formula: " + f.text + "\n";
      kb.formulas.push_back(f.eval);
    }
  }
  return kb;
}

inline GenKB random_stratified(std::mt19937_64& rng, std::size_t atoms, std::size_t max_strata) {
  GenKB kb;
  kb.atoms = atoms;
  kb.text = header(atoms);
  const std::size_t count = 1 + pick(rng, max_strata);
  for (std::size_t i = 0; i < count; ++i) {
    auto f = pick(rng, 2) == 0 ? random_rule(rng, atoms) : random_formula(rng, atoms, 3);
    kb.text += "stratum: " + f.text + "\n";
    kb.formulas.push_back(f.eval);
  }
  return kb;
}

inline bool all_hold(const std::vector<Eval>& fs, std::size_t upto, std::uint64_t w) {
  for (std::size_t i = 0; i < upto; ++i) {
    if (!fs[i](w)) return false;
  }
  return true;
}

// Truth table: every model of K containing S contains b.
inline bool oracle_entails(const GenKB& kb, std::uint64_t s, std::size_t b) {
  for (std::uint64_t w = 0; w < (std::uint64_t{1} << kb.atoms); ++w) {
    if (all_hold(kb.formulas, kb.formulas.size(), w) && (w & s) == s && !((w >> b) & 1U)) {
      return false;
    }
  }
  return true;
}

// Prefix definition over strata: some i with alpha_1..alpha_i & S |= b and
// alpha_1..alpha_i & S & b satisfiable.
inline bool oracle_default(const GenKB& kb, std::uint64_t s, std::size_t b) {
  for (std::size_t i = 0; i <= kb.formulas.size(); ++i) {
    bool entailed = true;
    bool consistent = false;
    for (std::uint64_t w = 0; w < (std::uint64_t{1} << kb.atoms); ++w) {
      if (!all_hold(kb.formulas, i, w) || (w & s) != s) continue;
      if ((w >> b) & 1U) {
        consistent = true;
      } else {
        entailed = false;
      }
    }
    if (entailed && consistent) return true;
  }
  return false;
}

}  // namespace testsupport
