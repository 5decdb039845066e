#include "leibniz/cli.hpp"

#include "leibniz/differentiation.hpp"
#include "leibniz/error.hpp"
#include "leibniz/format.hpp"
#include "leibniz/hyperreal.hpp"
#include "leibniz/parser.hpp"
#include "leibniz/solver.hpp"
#include "leibniz/summation.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <ostream>
#include <sstream>

namespace leibniz::cli {

namespace {

using nlohmann::json;

enum class OutputMode { Plain, LaTeX, JSON };

struct Options {
  std::vector<std::string> inputs;
  std::string var;
  std::string at;
  std::string side = "both";
  std::string target;
  std::string from;
  std::string to;
  std::string curve;
  std::vector<std::string> hold;
  std::vector<std::string> independent;
  std::vector<std::string> positive;
  int order = 0;
  double tol = 1e-8;
  bool json = false;
  bool latex = false;
};

// A ParseError annotated with the text it came from, for caret rendering.
struct InputError {
  ParseError error;
  std::string text;
};

class Session {
 public:
  Session(const Options& options, std::ostream& out, std::ostream& err)
      : o_(options), out_(out), err_(err), mode_(options.json ? OutputMode::JSON : (options.latex ? OutputMode::LaTeX : OutputMode::Plain)) {
    for (const auto& s : o_.independent) assumptions_.independent.insert(checked_symbol(s, "--independent"));
    for (const auto& s : o_.positive) assumptions_.positive.insert(checked_symbol(s, "--positive"));
  }

  void diff(int order) {
    Statement s = statement(single_input());
    if (s.is_equation()) {
      emit_equation(nth_differential(s.equation(), order, assumptions_));
    } else {
      emit_expr(nth_differential(s.lhs, order, assumptions_));
    }
  }

  void derive() {
    std::vector<Equation> eqs = equations();
    RatioTarget target = ratio_target();
    Solution sol = solve_for_ratio(eqs, target, assumptions_);
    emit_solution(sol);
  }

  void partial() {
    if (o_.inputs.size() != 1) usage("partial takes exactly one equation");
    Equation eq = equation(o_.inputs.front());
    RatioTarget target = ratio_target();
    std::set<std::string> held;
    for (const auto& s : o_.hold) held.insert(checked_symbol(s, "--hold"));
    emit_solution(partial_ratio(eq, target, held, assumptions_));
  }

  void second() {
    std::vector<Equation> eqs = equations();
    RatioTarget target = ratio_target();
    SecondDerivative r = second_derivative(eqs, target.numerator.base, target.denominator.base, assumptions_);
    if (mode_ == OutputMode::JSON) {
      json j = ok("second");
      j["result"] = {{"notation", expr_json(r.notation)}, {"value", expr_json(r.value)}, {"side_conditions", conditions_json(r.side_conditions)}};
      out_ << j.dump() << "\n";
      return;
    }
    out_ << render(Equation(r.notation, r.value)) << "\n";
    note_conditions(r.side_conditions);
  }

  void limit_command() {
    Expr e = expression(single_input());
    std::string var = required_symbol(o_.var, "--var");
    LimitPoint point = limit_point(o_.at);
    Side side = parse_side(o_.side);
    int order = o_.order > 0 ? o_.order : Hyperreal::kDefaultOrder;
    LimitResult r = limit(e, var, point, side, order);
    std::optional<std::string> series;
    if (point.kind == LimitPoint::Kind::Finite && side != Side::Both) {
      try {
        Hyperreal x = Hyperreal(Scalar(point.value), order) + Hyperreal::monomial(Rational(side == Side::Right ? 1 : -1), 1, order);
        series = hr_eval(e, {{var, x}}, order).str();
      } catch (const Error&) {
      }
    }
    emit_limit("limit", r, series);
  }

  void slope() {
    Expr e = expression(single_input());
    std::string var = required_symbol(o_.var, "--var");
    LimitPoint point = limit_point(o_.at);
    if (point.kind != LimitPoint::Kind::Finite) usage("--at must be a finite rational for slope");
    int order = o_.order > 0 ? o_.order : Hyperreal::kDefaultOrder;
    emit_limit("slope", slope_at(e, var, point.value, order), std::nullopt);
  }

  void integrate() {
    Expr e = expression(single_input());
    Potential p = antidifferential(DifferentialForm(e), assumptions_);
    std::optional<Scalar> total;
    if (!o_.from.empty() || !o_.to.empty()) {
      if (o_.from.empty() || o_.to.empty()) usage("--from and --to must be given together");
      total = total_difference(p, path_point(o_.from, "--from"), path_point(o_.to, "--to"));
    }
    if (mode_ == OutputMode::JSON) {
      json j = ok("integrate");
      j["result"] = {{"potential", expr_json(p.expr)}, {"constant", "C"}};
      if (total) j["result"]["total"] = scalar_json(*total);
      out_ << j.dump() << "\n";
      return;
    }
    Expr with_c = p.expr + Expr::constant(NamedConstant::C);
    out_ << (mode_ == OutputMode::LaTeX ? format_expr(with_c, Style::LaTeX) : p.str()) << "\n";
    if (total) out_ << total->str() << "\n";
  }

  void sum() {
    Expr e = expression(single_input());
    SumSpec spec{e, required_symbol(o_.var.empty() ? "x" : o_.var, "--var"), rational(o_.from, "--from"),
                 rational(o_.to, "--to"), std::nullopt};
    if (!o_.curve.empty()) spec.curve = equation(o_.curve);
    SumOptions options;
    options.tolerance = o_.tol;
    SumResult r = infinite_sum(spec, options);
    if (mode_ == OutputMode::JSON) {
      json j = ok("sum");
      j["result"] = {{"value", r.value}, {"slices", r.slices}, {"error_estimate", r.error_estimate}, {"tolerance", o_.tol},
                     {"slice", expr_json(slice_coefficient(spec) * dvar(spec.parameter))}};
      out_ << j.dump() << "\n";
      return;
    }
    out_ << shortest(r.value) << "\n";
  }

  void parse() {
    Statement s = statement(single_input());
    if (s.is_equation()) {
      emit_equation(s.equation());
    } else {
      emit_expr(s.lhs);
    }
  }

  static std::string shortest(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
  }

 private:
  [[noreturn]] static void usage(const std::string& message) { throw Error(ErrorCode::InvalidArgument, message); }

  static std::string checked_symbol(const std::string& name, const char* flag) {
    Expr e;
    try {
      e = parse_expr(name);
    } catch (const Error&) {
      usage(std::string(flag) + " expects symbol names, got '" + name + "'");
    }
    if (!e.is(Kind::Symbol)) usage(std::string(flag) + " expects symbol names, got '" + name + "'");
    return name;
  }

  static std::string required_symbol(const std::string& name, const char* flag) {
    if (name.empty()) usage(std::string(flag) + " is required");
    return checked_symbol(name, flag);
  }

  const std::string& single_input() const {
    if (o_.inputs.size() != 1) usage("expected exactly one expression");
    return o_.inputs.front();
  }

  static Statement statement(const std::string& text) {
    try {
      return parse_statement(text);
    } catch (const ParseError& e) {
      throw InputError{e, text};
    }
  }

  static Expr expression(const std::string& text) {
    Statement s = statement(text);
    if (s.is_equation()) usage("expected an expression, not an equation: '" + text + "'");
    return s.lhs;
  }

  static Equation equation(const std::string& text) {
    Statement s = statement(text);
    if (!s.is_equation()) usage("expected an equation 'lhs = rhs': '" + text + "'");
    return s.equation();
  }

  std::vector<Equation> equations() const {
    if (o_.inputs.empty()) usage("expected at least one equation");
    std::vector<Equation> out;
    for (const auto& text : o_.inputs) out.push_back(equation(text));
    return out;
  }

  RatioTarget ratio_target() const {
    if (o_.target.empty()) usage("--target is required, e.g. --target dy/dx");
    try {
      return RatioTarget::parse(o_.target);
    } catch (const ParseError& e) {
      throw InputError{e, o_.target};
    }
  }

  static Rational rational(const std::string& text, const char* flag) {
    if (text.empty()) usage(std::string(flag) + " is required");
    Expr e;
    try {
      e = parse_expr(text);
    } catch (const ParseError& err) {
      throw InputError{err, text};
    }
    if (!e.is_number()) usage(std::string(flag) + " expects a rational number, got '" + text + "'");
    return e.value();
  }

  static LimitPoint limit_point(const std::string& text) {
    if (text == "inf" || text == "+inf") return LimitPoint::plus_infinity();
    if (text == "-inf") return LimitPoint::minus_infinity();
    return LimitPoint::at(rational(text, "--at"));
  }

  static Side parse_side(const std::string& text) {
    if (text == "left") return Side::Left;
    if (text == "right") return Side::Right;
    return Side::Both;
  }

  static PathPoint path_point(const std::string& text, const char* flag) {
    PathPoint point;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
      auto eq = item.find('=');
      if (eq == std::string::npos) usage(std::string(flag) + " expects assignments like x=2,y=3");
      point[checked_symbol(item.substr(0, eq), flag)] = rational(item.substr(eq + 1), flag);
    }
    return point;
  }

  std::string render(const Expr& e) const { return format_expr(e, mode_ == OutputMode::LaTeX ? Style::LaTeX : Style::Plain); }
  std::string render(const Equation& eq) const {
    return format_equation(eq, mode_ == OutputMode::LaTeX ? Style::LaTeX : Style::Plain);
  }

  static json expr_json(const Expr& e) {
    return {{"plain", format_expr(e)}, {"latex", format_expr(e, Style::LaTeX)}, {"tree", to_json(e)}};
  }

  static json conditions_json(const std::vector<Expr>& conditions) {
    json arr = json::array();
    for (const Expr& c : conditions) arr.push_back(expr_json(c));
    return arr;
  }

  static json scalar_json(const Scalar& s) { return {{"value", s.str()}, {"exact", s.is_exact()}}; }

  json ok(const std::string& command) const { return {{"command", command}, {"ok", true}}; }

  void emit_expr(const Expr& e) {
    if (mode_ == OutputMode::JSON) {
      json j = ok(command_);
      j["result"] = expr_json(e);
      out_ << j.dump() << "\n";
      return;
    }
    out_ << render(e) << "\n";
  }

  void emit_equation(const Equation& eq) {
    if (mode_ == OutputMode::JSON) {
      json j = ok(command_);
      j["result"] = {{"lhs", expr_json(eq.lhs())}, {"rhs", expr_json(eq.rhs())}};
      out_ << j.dump() << "\n";
      return;
    }
    out_ << render(eq) << "\n";
  }

  void note_conditions(const std::vector<Expr>& conditions) {
    if (conditions.empty()) return;
    err_ << "assuming";
    for (std::size_t i = 0; i < conditions.size(); ++i) err_ << (i ? ", " : " ") << format_expr(conditions[i]) << " != 0";
    err_ << "\n";
  }

  void emit_solution(const Solution& sol) {
    if (mode_ == OutputMode::JSON) {
      json j = ok(command_);
      j["result"] = expr_json(sol.value);
      j["result"]["side_conditions"] = conditions_json(sol.side_conditions);
      out_ << j.dump() << "\n";
      return;
    }
    out_ << render(sol.value) << "\n";
    note_conditions(sol.side_conditions);
  }

  void emit_limit(const char* command, const LimitResult& r, const std::optional<std::string>& series) {
    if (mode_ == OutputMode::JSON) {
      static const char* kinds[] = {"finite", "plus_infinity", "minus_infinity", "undefined"};
      json j = ok(command);
      j["result"] = {{"kind", kinds[static_cast<int>(r.kind)]}};
      if (r.is_finite()) {
        j["result"]["value"] = r.value.str();
        j["result"]["exact"] = r.value.is_exact();
        j["result"]["float_contaminated"] = !r.value.is_exact();
      }
      if (r.kind == LimitResult::Kind::Undefined) j["result"]["reason"] = r.reason;
      if (series) j["result"]["series"] = *series;
      out_ << j.dump() << "\n";
      return;
    }
    if (mode_ == OutputMode::LaTeX) {
      switch (r.kind) {
        case LimitResult::Kind::Finite:
          out_ << (r.value.is_exact() ? format_expr(Expr::number(r.value.exact()), Style::LaTeX) : r.value.str()) << "\n";
          break;
        case LimitResult::Kind::PlusInfinity: out_ << "\\infty\n"; break;
        case LimitResult::Kind::MinusInfinity: out_ << "-\\infty\n"; break;
        case LimitResult::Kind::Undefined: out_ << "\\text{undefined}\n"; break;
      }
    } else {
      out_ << r.str() << "\n";
    }
    if (r.kind == LimitResult::Kind::Undefined) err_ << "undefined: " << r.reason << "\n";
  }

 public:
  std::string command_;

 private:
  const Options& o_;
  std::ostream& out_;
  std::ostream& err_;
  OutputMode mode_;
  Assumptions assumptions_;
};

json error_json(const std::string& command, const std::string& code, const std::string& message) {
  json j = {{"command", command.empty() ? json(nullptr) : json(command)}, {"ok", false}};
  j["error"] = {{"code", code}, {"message", message}};
  return j;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"leibniz: differentials, derivative ratios, eps-series limits and infinite sums", "leibniz"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  auto common = [&o](CLI::App* sub, const char* what) {
    sub->add_option("input", o.inputs, what)->required();
    sub->add_flag("--json", o.json, "Emit JSON (see docs/output.schema.json)");
    sub->add_flag("--latex", o.latex, "Emit LaTeX");
    sub->add_option("--independent", o.independent, "Independent symbols (d2x = 0)")->delimiter(',');
    sub->add_option("--positive", o.positive, "Symbols known to be positive")->delimiter(',');
  };

  auto* diff = app.add_subcommand("diff", "Total differential of an expression or equation");
  common(diff, "Expression or equation");
  auto* nthdiff = app.add_subcommand("nthdiff", "n-th differential");
  common(nthdiff, "Expression or equation");
  nthdiff->add_option("--order", o.order, "Number of applications of d")->required()->check(CLI::PositiveNumber);
  auto* derive = app.add_subcommand("derive", "Solve differentiated equations for a ratio such as dy/dx");
  common(derive, "Equations");
  derive->add_option("--target", o.target, "Ratio to solve for, e.g. dy/dx")->required();
  auto* partial = app.add_subcommand("partial", "Partial derivative with held symbols");
  common(partial, "Equation");
  partial->add_option("--target", o.target, "Ratio to solve for, e.g. dy/dz")->required();
  partial->add_option("--hold", o.hold, "Symbols whose differentials are set to zero")->delimiter(',');
  auto* second = app.add_subcommand("second", "Second derivative d2y/dx^2 - (dy/dx)*d2x/dx^2");
  common(second, "Equations");
  second->add_option("--target", o.target, "First derivative whose derivative is wanted, e.g. dy/dx")->required();
  auto* limit = app.add_subcommand("limit", "Limit by eps-substitution");
  common(limit, "Expression");
  limit->add_option("--var", o.var, "Variable")->required();
  limit->add_option("--at", o.at, "Point: rational, inf or -inf")->required();
  limit->add_option("--side", o.side, "left, right or both")->check(CLI::IsMember({"left", "right", "both"}));
  limit->add_option("--order", o.order, "Truncation order (default 8)")->check(CLI::PositiveNumber);
  auto* slope = app.add_subcommand("slope", "Standard part of (f(a+eps) - f(a))/eps");
  common(slope, "Expression");
  slope->add_option("--var", o.var, "Variable")->required();
  slope->add_option("--at", o.at, "Rational point")->required();
  slope->add_option("--order", o.order, "Truncation order (default 8)")->check(CLI::PositiveNumber);
  auto* integrate = app.add_subcommand("integrate", "Antidifferential of an exact form, optionally between two points");
  common(integrate, "Differential form");
  integrate->add_option("--from", o.from, "Start point, e.g. x=2,y=3");
  integrate->add_option("--to", o.to, "End point, e.g. x=7,y=4");
  auto* sum = app.add_subcommand("sum", "Numeric infinite sum of slices");
  common(sum, "Integrand, e.g. \"y*dx\" or \"sqrt(dx^2 + dy^2)\"");
  sum->add_option("--var", o.var, "Slice parameter (default x)");
  sum->add_option("--from", o.from, "Lower end")->required();
  sum->add_option("--to", o.to, "Upper end")->required();
  sum->add_option("--curve", o.curve, "Curve y = f(x) used to eliminate y and dy");
  sum->add_option("--tol", o.tol, "Tolerance (default 1e-8)")->check(CLI::PositiveNumber);
  auto* parse = app.add_subcommand("parse", "Parse and print the normal form");
  common(parse, "Expression or equation");

  std::string command;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kSuccess;
    }
    bool json_mode = std::find(args.begin(), args.end(), "--json") != args.end();
    if (json_mode) {
      out << error_json(args.empty() ? "" : args.front(), "UsageError", e.what()).dump() << "\n";
    } else {
      err << "error: " << e.what() << "\nRun 'leibniz --help' for usage.\n";
    }
    return kUsageError;
  }
  if (!app.get_subcommands().empty()) command = app.get_subcommands().front()->get_name();

  try {
    Session s(o, out, err);
    s.command_ = command;
    if (command == "diff") s.diff(1);
    if (command == "nthdiff") s.diff(o.order);
    if (command == "derive") s.derive();
    if (command == "partial") s.partial();
    if (command == "second") s.second();
    if (command == "limit") s.limit_command();
    if (command == "slope") s.slope();
    if (command == "integrate") s.integrate();
    if (command == "sum") s.sum();
    if (command == "parse") s.parse();
    return kSuccess;
  } catch (const InputError& e) {
    if (o.json) {
      json j = error_json(command, "ParseError", e.error.what());
      j["error"]["kind"] = std::string(kind_name(e.error.kind()));
      j["error"]["span"] = {{"start", e.error.span().start}, {"end", e.error.span().end}};
      j["error"]["input"] = e.text;
      out << j.dump() << "\n";
    } else {
      err << render_parse_error(e.error, e.text);
    }
    return kUsageError;
  } catch (const Error& e) {
    int code = e.code() == ErrorCode::InvalidArgument ? kUsageError : kDomainError;
    if (o.json) {
      out << error_json(command, std::string(code_name(e.code())), e.what()).dump() << "\n";
    } else {
      err << "error [" << code_name(e.code()) << "]: " << e.what() << "\n";
    }
    return code;
  }
}

}  // namespace leibniz::cli
