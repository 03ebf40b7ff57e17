#pragma once

// Ground atoms over a finite universe and Herbrand interpretations of them.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "causal/ast.hpp"

namespace causal {

struct GroundAtom {
  std::string predicate;
  std::vector<std::string> args;

  friend bool operator==(const GroundAtom&, const GroundAtom&) = default;
  friend auto operator<=>(const GroundAtom&, const GroundAtom&) = default;
};

inline std::string to_string(const GroundAtom& a) {
  std::string out = a.predicate;
  if (!a.args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (i) out += ',';
      out += a.args[i];
    }
    out += ')';
  }
  return out;
}

// Converts a variable-free atom formula.
inline GroundAtom to_ground_atom(const Formula& atom) {
  GroundAtom g{atom.predicate(), {}};
  for (const Term& t : atom.args()) {
    if (t.is_variable()) throw GroundingError("atom " + to_string(atom) + " is not ground");
    g.args.push_back(t.name);
  }
  return g;
}

inline Formula to_formula(const GroundAtom& a) {
  std::vector<Term> args;
  for (const auto& c : a.args) args.push_back(Term::constant(c));
  return Formula::atom(a.predicate, std::move(args));
}

// Canonical ordering of all ground atoms of a signature: predicates in
// declaration order, argument tuples lexicographic over universe order.
class AtomTable {
 public:
  explicit AtomTable(const Signature& sig) : signature_(sig) {
    const auto& universe = sig.universe();
    for (std::size_t p = 0; p < sig.predicates().size(); ++p) {
      const Predicate& pred = sig.predicates()[p];
      std::size_t count = 1;
      for (std::size_t k = 0; k < pred.arity; ++k) count *= universe.size();
      for (std::size_t n = 0; n < count; ++n) {
        // Last argument varies fastest.
        GroundAtom atom{pred.name, std::vector<std::string>(pred.arity)};
        std::size_t rest = n;
        for (std::size_t k = pred.arity; k-- > 0;) {
          atom.args[k] = universe[rest % universe.size()];
          rest /= universe.size();
        }
        index_.emplace(atom, atoms_.size());
        atoms_.push_back(std::move(atom));
        predicate_index_.push_back(p);
      }
    }
  }

  const Signature& signature() const { return signature_; }
  std::size_t size() const { return atoms_.size(); }
  const GroundAtom& atom(std::size_t i) const { return atoms_[i]; }
  const std::vector<GroundAtom>& atoms() const { return atoms_; }
  const Predicate& predicate_of(std::size_t i) const { return signature_.predicates()[predicate_index_[i]]; }

  std::optional<std::size_t> find(const GroundAtom& a) const {
    auto it = index_.find(a);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t index_of(const GroundAtom& a) const {
    auto i = find(a);
    if (!i) throw Error("ground atom " + to_string(a) + " is outside the signature");
    return *i;
  }

  // Rendering used in model listings: hat atoms as strong negation.
  std::string display(std::size_t i) const {
    GroundAtom a = atoms_[i];
    a.predicate = signature_.display_name(a.predicate);
    return to_string(a);
  }

 private:
  Signature signature_;
  std::vector<GroundAtom> atoms_;
  std::vector<std::size_t> predicate_index_;
  std::map<GroundAtom, std::size_t> index_;
};

class Interpretation {
 public:
  explicit Interpretation(std::shared_ptr<const AtomTable> table)
      : table_(std::move(table)), truth_(table_->size(), false) {}

  Interpretation(std::shared_ptr<const AtomTable> table, std::vector<bool> truth)
      : table_(std::move(table)), truth_(std::move(truth)) {
    if (truth_.size() != table_->size()) throw Error("interpretation size does not match its atom table");
  }

  const AtomTable& table() const { return *table_; }
  const std::shared_ptr<const AtomTable>& table_ptr() const { return table_; }
  const std::vector<bool>& truth() const { return truth_; }

  bool value(std::size_t i) const { return truth_[i]; }
  bool value(const GroundAtom& a) const { return truth_[table_->index_of(a)]; }
  void set(std::size_t i, bool v) { truth_[i] = v; }
  void set(const GroundAtom& a, bool v) { truth_[table_->index_of(a)] = v; }

  std::vector<GroundAtom> true_atoms() const {
    std::vector<GroundAtom> out;
    for (std::size_t i = 0; i < truth_.size(); ++i) {
      if (truth_[i]) out.push_back(table_->atom(i));
    }
    return out;
  }

  // Same truth values re-indexed onto `target`; atoms missing from this
  // interpretation are false, atoms missing from `target` are dropped.
  Interpretation project(std::shared_ptr<const AtomTable> target) const {
    Interpretation out(std::move(target));
    for (std::size_t i = 0; i < out.table().size(); ++i) {
      if (auto j = table_->find(out.table().atom(i))) out.truth_[i] = truth_[*j];
    }
    return out;
  }

  friend bool operator==(const Interpretation& a, const Interpretation& b) { return a.truth_ == b.truth_; }
  friend bool operator<(const Interpretation& a, const Interpretation& b) { return a.truth_ < b.truth_; }

 private:
  std::shared_ptr<const AtomTable> table_;
  std::vector<bool> truth_;
};

// True atoms in canonical order, space separated; hats as `-p(...)`.
inline std::string to_string(const Interpretation& i, const std::vector<std::string>& hide = {}) {
  std::string out;
  for (std::size_t k = 0; k < i.table().size(); ++k) {
    if (!i.value(k)) continue;
    const auto& pred = i.table().predicate_of(k).name;
    if (std::find(hide.begin(), hide.end(), pred) != hide.end()) continue;
    if (!out.empty()) out += ' ';
    out += i.table().display(k);
  }
  return out;
}

struct ModelSet {
  std::shared_ptr<const AtomTable> atoms;
  std::vector<Interpretation> models;
  // Predicates omitted when rendering.
  std::vector<std::string> projected_out;

  std::size_t size() const { return models.size(); }
  bool empty() const { return models.empty(); }

  // Sorted, duplicate-free.
  void normalize() {
    std::sort(models.begin(), models.end());
    models.erase(std::unique(models.begin(), models.end()), models.end());
  }

  ModelSet project(std::shared_ptr<const AtomTable> target) const {
    ModelSet out{target, {}, {}};
    for (const auto& m : models) out.models.push_back(m.project(target));
    out.normalize();
    return out;
  }

  std::vector<std::string> lines() const {
    std::vector<std::string> out;
    for (const auto& m : models) out.push_back(to_string(m, projected_out));
    return out;
  }

  friend bool operator==(const ModelSet& a, const ModelSet& b) { return a.models == b.models; }
};

// One model per line, then a count line.
inline std::string to_string(const ModelSet& s) {
  std::string out;
  for (const auto& line : s.lines()) {
    out += line;
    out += '\n';
  }
  out += std::to_string(s.size());
  out += s.size() == 1 ? " model\n" : " models\n";
  return out;
}

}  // namespace causal
