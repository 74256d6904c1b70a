#include "chaindiff/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "chaindiff/combinatorics.hpp"
#include "chaindiff/diff.hpp"
#include "chaindiff/errors.hpp"
#include "chaindiff/fixtures.hpp"
#include "chaindiff/parser.hpp"
#include "chaindiff/serialize.hpp"

namespace chaindiff {
namespace cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string strip(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s) {
  const std::string t = strip(s);
  char* end = nullptr;
  double v = std::strtod(t.c_str(), &end);
  if (end == t.c_str() || *end != '\0')
    throw ArgumentError("bad number '" + t + "'");
  return v;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& part : split(s, ',')) out.push_back(parse_double(part));
  return out;
}

std::vector<std::vector<double>> parse_rows(const std::string& s) {
  std::vector<std::vector<double>> rows;
  for (const auto& row : split(s, ';')) rows.push_back(parse_doubles(row));
  return rows;
}

// Splits at commas that sit outside any parentheses.
std::vector<std::string> split_top(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

ConcreteFunc make_binding(const std::string& name, const std::string& kind,
                          const std::string& args) {
  if (kind == "linear") return fixtures::linear_functional(name, parse_doubles(args));
  if (kind == "linmap") return fixtures::linear_map(name, parse_rows(args));
  if (kind == "quadratic") return fixtures::quadratic_form(name, parse_rows(args));
  if (kind == "poly") return fixtures::polynomial(name, parse_doubles(args));
  if (kind == "explin") return fixtures::exp_linear(name, parse_doubles(args));
  if (kind == "gridlin") return fixtures::grid_integration(name, parse_doubles(args));
  if (kind == "abs") return fixtures::abs_value(name);
  if (kind == "prodxy") return fixtures::product_xy(name);
  if (kind == "bivar") return fixtures::bivariate_mix(name);
  throw ArgumentError("unknown binding kind '" + kind + "'");
}

int value_dim(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Scalar:
      return 1;
    case Value::Kind::Vector:
      return static_cast<int>(v.vec().size());
    case Value::Kind::Tuple:
      throw ArgumentError("tuple points need one --point entry per slot");
  }
  return 1;
}

void collect_point_vars(const Expr& e, std::set<std::string>& out) {
  if (e.kind() == ExprKind::PointVar) {
    out.insert(e.name());
    return;
  }
  if (e.kind() == ExprKind::Diff) {
    const DiffTerm& dt = e.diff_term();
    collect_point_vars(*dt.target, out);
    collect_point_vars(*dt.base, out);
    for (const Expr& d : dt.directions) collect_point_vars(d, out);
    return;
  }
  for (const Expr& c : e.children()) collect_point_vars(c, out);
}

int usage_error(std::ostream& err, const std::string& msg) {
  err << "error: " << msg << "\n";
  return 2;
}

int run_diff(const DiffCmd& cmd, std::ostream& out, std::ostream& err) {
  if (cmd.order >= 0 &&
      cmd.order != static_cast<int>(cmd.direction_indices.size()))
    return usage_error(err, "--order disagrees with the direction list");
  Expr e = expand_differentials(parse(cmd.expr_text));
  std::vector<RuleTrace> trace;
  Expr result = cmd.direction_indices.empty()
                    ? e
                    : nth_chain_diff(e, Expr::point_var(cmd.at),
                                     cmd.direction_indices,
                                     cmd.trace ? &trace : nullptr);
  if (cmd.json) {
    out << to_json(result).dump(2) << "\n";
  } else {
    out << to_dsl(result) << "\n";
  }
  for (const RuleTrace& t : trace) {
    json line;
    line["rule"] = rule_name(t.applied_rule);
    line["input"] = to_dsl(t.input);
    line["output"] = to_dsl(t.output);
    out << line.dump() << "\n";
  }
  return 0;
}

int run_verify(const VerifyCmd& cmd, std::ostream& out, std::ostream& err) {
  std::map<std::string, ConcreteFunc> bindings;
  if (!cmd.bindings_file.empty()) {
    std::ifstream in(cmd.bindings_file);
    if (!in) return usage_error(err, "cannot open '" + cmd.bindings_file + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    bindings = parse_bindings_text(ss.str());
  }
  for (const auto& [name, coeffs] : cmd.inline_bindings)
    bindings.insert_or_assign(name,
                              fixtures::linear_functional(name, parse_doubles(coeffs)));

  Expr ce = parse(cmd.expr_text);
  std::string var;
  Expr applied = ce;
  if (role_of(ce) == Role::Function) {
    var = "x";
    applied = canonicalize(apply_at(ce, Expr::point_var(var)));
  } else {
    std::set<std::string> pvars;
    collect_point_vars(ce, pvars);
    if (pvars.size() != 1)
      return usage_error(err, "expression must use exactly one point variable");
    var = *pvars.begin();
  }
  applied = expand_differentials(applied);

  const int n = static_cast<int>(cmd.directions.size());
  if (n < 1) return usage_error(err, "at least one direction is required");
  if (cmd.order >= 0 && cmd.order != n)
    return usage_error(err, "--order disagrees with the direction list");
  Value pt = parse_value(cmd.point);

  EvalContext ctx;
  ctx.bindings = bindings;
  ctx.point_values[var] = pt;
  for (int i = 0; i < n; ++i)
    ctx.direction_values[i + 1] = parse_value(cmd.directions[i]);

  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i + 1;
  Expr symbolic = nth_chain_diff(applied, Expr::point_var(var), idx);

  ConcreteSpace space = cmd.grid_point ? ConcreteSpace::grid(value_dim(pt))
                                       : ConcreteSpace::euclidean(value_dim(pt));

  ConcreteFunc target;
  target.name = "expr";
  target.domain = {space};
  target.evaluate = [applied, ctx, var](const std::vector<Value>& args) {
    EvalContext local = ctx;
    local.point_values[var] = args[0];
    return eval(applied, local);
  };
  Value probe = target.evaluate({pt});
  target.codomain = probe.kind() == Value::Kind::Scalar
                        ? Codomain::real()
                        : Codomain::of(ConcreteSpace::euclidean(
                              static_cast<int>(probe.vec().size())));

  VerificationReport rep = verify(symbolic, target, ctx, cmd.tol);
  json j = to_json(rep);
  j["symbolic"] = to_dsl(symbolic);
  out << j.dump(2) << "\n";
  return rep.passed ? 0 : 1;
}

int run_partitions(const PartitionsCmd& cmd, std::ostream& out, std::ostream&) {
  for (const Partition& p : partitions(cmd.n)) out << to_string(p) << "\n";
  return 0;
}

int run_canon(const CanonCmd& cmd, std::ostream& out, std::ostream&) {
  Expr e = parse(cmd.expr_text);
  if (cmd.json) {
    out << to_json(e).dump(2) << "\n";
  } else {
    out << to_dsl(e) << "\n";
  }
  return 0;
}

}  // namespace

Value parse_value(const std::string& text) {
  std::string t = strip(text);
  if (t.size() >= 2 && t.front() == '(' && t.back() == ')')
    t = strip(t.substr(1, t.size() - 2));
  std::vector<std::string> parts = split_top(t);
  bool nested = false;
  for (const auto& p : parts)
    if (p.find('(') != std::string::npos) nested = true;
  if (nested) {
    std::vector<Value> items;
    for (const auto& p : parts) items.push_back(parse_value(p));
    return Value::tuple(std::move(items));
  }
  std::vector<double> nums;
  for (const auto& p : parts) nums.push_back(parse_double(p));
  if (nums.size() == 1) return Value::scalar(nums[0]);
  return Value::vector(std::move(nums));
}

std::map<std::string, ConcreteFunc> parse_bindings_text(const std::string& text) {
  std::map<std::string, ConcreteFunc> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = strip(line);
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string name, kind, args;
    ls >> name >> kind;
    std::getline(ls, args);
    args = strip(args);
    if (name.empty() || kind.empty())
      throw ArgumentError("bad binding line '" + line + "'");
    out.insert_or_assign(name, make_binding(name, kind, args));
  }
  return out;
}

int run(const Command& cmd, std::ostream& out, std::ostream& err) {
  try {
    if (const auto* d = std::get_if<DiffCmd>(&cmd)) return run_diff(*d, out, err);
    if (const auto* v = std::get_if<VerifyCmd>(&cmd)) return run_verify(*v, out, err);
    if (const auto* p = std::get_if<PartitionsCmd>(&cmd))
      return run_partitions(*p, out, err);
    return run_canon(std::get<CanonCmd>(cmd), out, err);
  } catch (const ParseError& e) {
    return usage_error(err, e.what());
  } catch (const ArgumentError& e) {
    return usage_error(err, e.what());
  } catch (const StructuralError& e) {
    return usage_error(err, e.what());
  } catch (const EvalError& e) {
    return usage_error(err, e.what());
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"symbolic chain differentials with numeric cross checks"};
  app.require_subcommand(1);

  DiffCmd dc;
  std::string dirs_csv;
  auto* sd = app.add_subcommand("diff", "differentiate an expression");
  sd->add_option("expr", dc.expr_text, "expression text")->required();
  sd->add_option("--dirs", dirs_csv,
                 "comma separated direction indices, 0 for the zero direction");
  sd->add_option("--order", dc.order, "differential order; must match --dirs");
  sd->add_option("--at", dc.at, "point variable name (default x)");
  sd->add_flag("--trace", dc.trace, "emit one rule application per line");
  sd->add_flag("--json", dc.json, "print the result tree as JSON");

  VerifyCmd vc;
  std::string dirs_semis;
  auto* sv = app.add_subcommand("verify", "check a differential numerically");
  sv->add_option("expr", vc.expr_text, "expression text")->required();
  sv->add_option("--bindings", vc.bindings_file, "bindings file");
  sv->add_option("--point", vc.point, "base point, e.g. (2,0)")->required();
  sv->add_option("--dirs", dirs_semis, "semicolon separated directions")
      ->required();
  sv->add_option("--order", vc.order, "differential order; must match --dirs");
  sv->add_option("--tol", vc.tol, "relative tolerance (default 1e-5)");
  sv->add_flag("--grid", vc.grid_point, "treat the point as a grid function");
  sv->allow_extras();

  PartitionsCmd pc;
  auto* sp = app.add_subcommand("partitions", "list set partitions of {1..n}");
  sp->add_option("n", pc.n, "ground set size")->required();

  CanonCmd cc;
  auto* sc = app.add_subcommand("canon", "parse and print the canonical form");
  sc->add_option("expr", cc.expr_text, "expression text")->required();
  sc->add_flag("--json", cc.json, "print the canonical tree as JSON");

  try {
    std::vector<std::string> argv_storage = args;
    std::vector<const char*> argv;
    argv.push_back("chaindiff");
    for (const auto& a : argv_storage) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    return usage_error(err, e.what());
  }

  if (sd->parsed()) {
    if (!dirs_csv.empty())
      for (const auto& p : split(dirs_csv, ','))
        dc.direction_indices.push_back(static_cast<int>(std::strtol(
            strip(p).c_str(), nullptr, 10)));
    return run(Command{dc}, out, err);
  }
  if (sv->parsed()) {
    for (const auto& p : split(dirs_semis, ';')) vc.directions.push_back(strip(p));
    std::vector<std::string> extra = sv->remaining();
    for (size_t i = 0; i < extra.size(); i += 2) {
      if (extra[i].rfind("--", 0) != 0 || i + 1 >= extra.size())
        return usage_error(err, "stray argument '" + extra[i] + "'");
      vc.inline_bindings[extra[i].substr(2)] = extra[i + 1];
    }
    return run(Command{vc}, out, err);
  }
  if (sp->parsed()) return run(Command{pc}, out, err);
  return run(Command{cc}, out, err);
}

}  // namespace cli
}  // namespace chaindiff
