#include "leibniz/solver.hpp"

#include "leibniz/differentiation.hpp"
#include "leibniz/error.hpp"
#include "leibniz/evaluate.hpp"
#include "leibniz/format.hpp"
#include "leibniz/parser.hpp"

#include <algorithm>
#include <tuple>

namespace leibniz {

RatioTarget RatioTarget::parse(std::string_view text) {
  Expr e = parse_expr(text);
  auto invalid = [&text]() -> RatioTarget {
    throw Error(ErrorCode::InvalidArgument,
                "target '" + std::string(text) + "' must be a ratio of first-order differentials such as dy/dx");
  };
  if (!e.is(Kind::Product) || e.operands().size() != 2) return invalid();
  const Expr& top = e.operands()[0];
  const Expr& bottom = e.operands()[1];
  if (!top.is(Kind::Differential) || top.order() != 1) return invalid();
  if (!bottom.is(Kind::Power) || !bottom.base().is(Kind::Differential) || bottom.base().order() != 1 ||
      !bottom.exponent().is_number(-1)) {
    return invalid();
  }
  return RatioTarget{top.atom(), bottom.base().atom()};
}

std::string RatioTarget::str() const { return numerator.name() + "/" + denominator.name(); }

namespace {

bool is_monomial_factor(const Expr& f) {
  if (f.is(Kind::Differential)) return true;
  return f.is(Kind::Power) && f.base().is(Kind::Differential) && f.exponent().is_integer() &&
         f.exponent().value() > 0;
}

[[noreturn]] void not_linear(const Expr& where) {
  throw Error(ErrorCode::NotLinearInDifferentials,
              "differentials must appear only as monomial factors, found '" + format_expr(where) + "'");
}

void add_to(DifferentialMonomialForm& form, const Expr& monomial, const Expr& coefficient) {
  auto [it, inserted] = form.try_emplace(monomial, coefficient);
  if (!inserted) it->second = it->second + coefficient;
}

DifferentialMonomialForm multiply(const DifferentialMonomialForm& a, const DifferentialMonomialForm& b) {
  DifferentialMonomialForm out;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) add_to(out, ma * mb, ca * cb);
  }
  return out;
}

DifferentialMonomialForm form_of(const Expr& e) {
  if (!e.has_differential()) return {{num(1), e}};
  if (e.has_operator()) not_linear(e);
  if (is_monomial_factor(e)) return {{e, num(1)}};
  if (e.is(Kind::Sum)) {
    DifferentialMonomialForm out;
    for (const Expr& t : e.operands()) {
      for (const auto& [m, c] : form_of(t)) add_to(out, m, c);
    }
    return out;
  }
  if (e.is(Kind::Product)) {
    DifferentialMonomialForm out{{num(1), num(1)}};
    for (const Expr& f : e.operands()) {
      if (f.has_differential() && !is_monomial_factor(f) && !f.is(Kind::Sum)) not_linear(f);
      out = multiply(out, form_of(f));
    }
    return out;
  }
  not_linear(e);
}

struct LinearResult {
  std::map<Expr, Expr> values;
  std::vector<Expr> free;
  std::vector<Expr> side_conditions;
};

// A linear system whose unknowns are the ratios m / unit for every monomial m
// other than the unit itself. The unit's own coefficient is the constant term.
class RatioSystem {
 public:
  RatioSystem(std::vector<DifferentialMonomialForm> rows, Expr unit) : rows_(std::move(rows)), unit_(std::move(unit)) {
    std::set<Expr> seen;
    for (const auto& row : rows_) {
      for (const auto& [m, c] : row) {
        if (m != unit_ && !is_zero(c)) seen.insert(m);
      }
    }
    unknowns_.assign(seen.begin(), seen.end());
  }

  bool has_unknown(const Expr& m) const { return std::find(unknowns_.begin(), unknowns_.end(), m) != unknowns_.end(); }

  Expr ratio(const Expr& m) const { return m * pow(unit_, -1); }

  LinearResult solve(const std::vector<Expr>& targets, std::optional<std::size_t> max_free) const {
    std::vector<Expr> candidates;
    for (const Expr& m : unknowns_) {
      if (std::find(targets.begin(), targets.end(), m) == targets.end()) candidates.push_back(m);
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Expr& a, const Expr& b) { return a.node_count() < b.node_count(); });
    std::size_t limit = std::min(candidates.size(), max_free.value_or(candidates.size()));

    constexpr int kMaxAttempts = 4096;
    int attempts = 0;
    for (std::size_t size = 0; size <= limit; ++size) {
      std::optional<LinearResult> best;
      std::tuple<std::size_t, std::size_t> best_score;
      std::vector<bool> pick(candidates.size(), false);
      std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(size), true);
      do {
        if (++attempts > kMaxAttempts) break;
        std::set<Expr> free;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
          if (pick[i]) free.insert(candidates[i]);
        }
        auto result = solve_with(free, targets);
        if (!result) continue;
        auto score = score_of(*result, targets);
        if (!best || score < best_score || (score == best_score && compare_values(*result, *best, targets) < 0)) {
          best = std::move(result);
          best_score = score;
        }
      } while (std::prev_permutation(pick.begin(), pick.end()));
      if (best) return *best;
      if (attempts > kMaxAttempts) break;
    }
    throw Error(ErrorCode::UnderdeterminedSystem, "the equations do not determine the requested ratio");
  }

 private:
  std::tuple<std::size_t, std::size_t> score_of(const LinearResult& r, const std::vector<Expr>& targets) const {
    std::set<DifferentialAtom> present;
    for (const Expr& t : targets) {
      for (const DifferentialAtom& atom : free_atoms(r.values.at(t)).differentials) present.insert(atom);
    }
    std::size_t surviving = 0;
    for (const Expr& f : r.free) {
      const auto atoms = free_atoms(f).differentials;
      if (std::any_of(atoms.begin(), atoms.end(), [&present](const DifferentialAtom& x) { return present.contains(x); })) {
        ++surviving;
      }
    }
    std::size_t nodes = 0;
    for (const Expr& t : targets) nodes += r.values.at(t).node_count();
    return {surviving, nodes};
  }

  static int compare_values(const LinearResult& a, const LinearResult& b, const std::vector<Expr>& targets) {
    for (const Expr& t : targets) {
      if (int c = compare(a.values.at(t), b.values.at(t))) return c;
    }
    return 0;
  }

  std::optional<LinearResult> solve_with(const std::set<Expr>& free, const std::vector<Expr>& targets) const {
    std::vector<Expr> bound;
    for (const Expr& m : unknowns_) {
      if (!free.contains(m)) bound.push_back(m);
    }
    const std::size_t n = rows_.size();
    const std::size_t k = bound.size();
    std::vector<std::vector<Expr>> a(n, std::vector<Expr>(k));
    std::vector<Expr> b(n);
    for (std::size_t r = 0; r < n; ++r) {
      std::vector<Expr> rhs;
      for (const auto& [m, c] : rows_[r]) {
        if (m == unit_) {
          rhs.push_back(-c);
        } else if (free.contains(m)) {
          rhs.push_back(-c * ratio(m));
        } else {
          auto col = static_cast<std::size_t>(std::find(bound.begin(), bound.end(), m) - bound.begin());
          a[r][col] = c;
        }
      }
      b[r] = Expr::sum(std::move(rhs));
    }

    // Fraction-free Gauss-Jordan elimination.
    std::vector<std::optional<std::size_t>> pivot_row(k);
    std::vector<bool> used(n, false);
    std::vector<Expr> conditions;
    for (std::size_t c = 0; c < k; ++c) {
      std::optional<std::size_t> choice;
      for (std::size_t r = 0; r < n; ++r) {
        if (used[r]) continue;
        if (is_zero(a[r][c])) {
          a[r][c] = Expr();
          continue;
        }
        if (!choice || simpler(a[r][c], a[*choice][c])) choice = r;
      }
      if (!choice) continue;
      std::size_t p = *choice;
      used[p] = true;
      pivot_row[c] = p;
      const Expr pivot = a[p][c];
      add_conditions(conditions, pivot);
      for (std::size_t r = 0; r < n; ++r) {
        if (r == p) continue;
        const Expr factor = a[r][c];
        if (is_zero(factor)) {
          a[r][c] = Expr();
          continue;
        }
        for (std::size_t j = 0; j < k; ++j) a[r][j] = pivot * a[r][j] - factor * a[p][j];
        b[r] = pivot * b[r] - factor * b[p];
        a[r][c] = Expr();
      }
    }

    for (std::size_t r = 0; r < n; ++r) {
      if (!used[r] && !is_zero(b[r])) return std::nullopt;
    }

    LinearResult result;
    result.free.assign(free.begin(), free.end());
    for (std::size_t c = 0; c < k; ++c) {
      if (!pivot_row[c]) continue;
      std::size_t r = *pivot_row[c];
      bool determined = true;
      for (std::size_t j = 0; j < k; ++j) {
        if (!pivot_row[j] && !is_zero(a[r][j])) determined = false;
      }
      if (determined) result.values.emplace(bound[c], b[r] / a[r][c]);
    }
    for (const Expr& t : targets) {
      if (!result.values.contains(t)) return std::nullopt;
    }
    result.side_conditions = std::move(conditions);
    return result;
  }

  // Records "f != 0" for each non-constant factor f of a divisor.
  static void add_conditions(std::vector<Expr>& into, const Expr& divisor) {
    std::vector<Expr> factors;
    if (divisor.is(Kind::Product)) {
      factors.assign(divisor.operands().begin(), divisor.operands().end());
    } else {
      factors.push_back(divisor);
    }
    for (Expr f : factors) {
      if (f.is(Kind::Power) && f.exponent().is_number() && f.exponent().value() > 0) f = f.base();
      if (f.is_number() || f.is(Kind::Constant)) continue;
      if (f.is(Kind::Function) && f.function() == Function::Exp) continue;
      if (std::find(into.begin(), into.end(), f) == into.end()) into.push_back(f);
    }
  }

  static bool simpler(const Expr& a, const Expr& b) {
    if (a.is_number() != b.is_number()) return a.is_number();
    return a.node_count() < b.node_count();
  }

  std::vector<DifferentialMonomialForm> rows_;
  Expr unit_;
  std::vector<Expr> unknowns_;
};

std::vector<DifferentialMonomialForm> differential_forms(const std::vector<Expr>& differences) {
  std::vector<DifferentialMonomialForm> rows;
  for (const Expr& e : differences) {
    DifferentialMonomialForm form = monomial_form(e);
    auto constant = form.find(num(1));
    if (constant != form.end()) {
      throw Error(ErrorCode::NotLinearInDifferentials,
                  "term '" + format_expr(constant->second) + "' carries no differential");
    }
    if (!form.empty()) rows.push_back(std::move(form));
  }
  return rows;
}

std::vector<Expr> first_differences(const std::vector<Equation>& equations, const Assumptions& assumptions) {
  std::vector<Expr> out;
  for (const Equation& eq : equations) out.push_back(differential(eq, assumptions).difference());
  return out;
}

Solution solve_ratio(const std::vector<Expr>& differences, const RatioTarget& target, std::optional<std::size_t> max_free) {
  if (target.numerator == target.denominator) {
    throw Error(ErrorCode::InvalidArgument, "target numerator and denominator must differ");
  }
  Expr top = Expr::differential(target.numerator);
  Expr unit = Expr::differential(target.denominator);
  RatioSystem system(differential_forms(differences), unit);
  if (!system.has_unknown(top)) {
    throw Error(ErrorCode::TargetAbsent, "'" + target.numerator.name() + "' does not occur in the differentiated equations");
  }
  LinearResult r = system.solve({top}, max_free);
  return Solution{r.values.at(top), r.side_conditions};
}

void merge_conditions(std::vector<Expr>& into, const std::vector<Expr>& from) {
  for (const Expr& c : from) {
    if (std::find(into.begin(), into.end(), c) == into.end()) into.push_back(c);
  }
}

}  // namespace

DifferentialMonomialForm monomial_form(const Expr& e) {
  DifferentialMonomialForm out;
  for (auto& [m, c] : form_of(normalize(e))) {
    if (!c.is_zero()) out.emplace(m, c);
  }
  return out;
}

Expr from_monomial_form(const DifferentialMonomialForm& form) {
  std::vector<Expr> terms;
  for (const auto& [m, c] : form) terms.push_back(m * c);
  return Expr::sum(std::move(terms));
}

Solution solve_for_ratio(const std::vector<Equation>& equations, const RatioTarget& target,
                         const Assumptions& assumptions) {
  return solve_ratio(first_differences(equations, assumptions), target, std::nullopt);
}

Solution partial_ratio(const Equation& equation, const RatioTarget& target, const std::set<std::string>& held,
                       const Assumptions& assumptions) {
  if (held.contains(target.numerator.base) || held.contains(target.denominator.base)) {
    throw Error(ErrorCode::HeldTargetConflict, "a held symbol cannot appear in the target " + target.str());
  }
  Bindings zeroed;
  for (const std::string& s : held) zeroed.emplace(dvar(s), Expr());
  Expr difference = substitute(differential(equation, assumptions).difference(), zeroed);
  return solve_ratio({difference}, target, 0);
}

SecondDerivative second_derivative(const std::vector<Equation>& equations, const std::string& dependent,
                                   const std::string& variable, const Assumptions& assumptions) {
  const Expr dx = dvar(variable);
  const Expr d2x = dvar(variable, 2);
  const Expr d2y = dvar(dependent, 2);

  Solution first = solve_for_ratio(equations, RatioTarget{{dependent, 1}, {variable, 1}}, assumptions);
  if (first.value.has_differential()) {
    throw Error(ErrorCode::UnderdeterminedSystem, "d" + dependent + "/d" + variable + " depends on other free ratios");
  }
  SecondDerivative out;
  out.side_conditions = first.side_conditions;
  out.notation = apply_independence(d2y * pow(dx, -2) - first.value * d2x * pow(dx, -2), assumptions);

  // Every first-order ratio da/dx, so order-1 atoms can be eliminated from
  // the second differentials.
  std::vector<Expr> differences = first_differences(equations, assumptions);
  RatioSystem firsts(differential_forms(differences), dx);
  std::vector<Expr> order_one;
  for (const Expr& e : differences) {
    for (const DifferentialAtom& atom : free_atoms(e).differentials) {
      Expr m = Expr::differential(atom);
      if (m != dx && std::find(order_one.begin(), order_one.end(), m) == order_one.end()) order_one.push_back(m);
    }
  }
  LinearResult ratios = firsts.solve(order_one, 0);
  merge_conditions(out.side_conditions, ratios.side_conditions);
  Bindings to_dx;
  for (const auto& [m, r] : ratios.values) to_dx.emplace(m, r * dx);

  std::vector<Expr> second;
  for (const Equation& eq : equations) {
    second.push_back(substitute(nth_differential(eq, 2, assumptions).difference(), to_dx));
  }
  RatioSystem seconds(differential_forms(second), pow(dx, 2));
  if (!seconds.has_unknown(d2y)) {
    throw Error(ErrorCode::TargetAbsent, "'" + d2y.atom().name() + "' does not occur in the second differentials");
  }
  LinearResult r = seconds.solve({d2y}, std::nullopt);
  merge_conditions(out.side_conditions, r.side_conditions);

  Bindings resolved;
  for (const auto& [m, v] : r.values) {
    if (m.is(Kind::Differential)) resolved.emplace(m, v * pow(dx, 2));
  }
  out.value = substitute(out.notation, resolved);
  if (out.value.has_differential()) {
    throw Error(ErrorCode::UnderdeterminedSystem, "the second derivative depends on free second differentials");
  }
  return out;
}

}  // namespace leibniz
