// dedekind: certified evaluation, integration and differentiation from the
// command line.
//
// Exit codes:
//   0  success
//   1  internal error
//   2  parse or usage error
//   3  guard violation (a separation or domain certificate failed)
//   4  budget exhausted; the widened enclosure is still printed

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dedekind/elementary.hpp"
#include "dedekind/errors.hpp"
#include "dedekind/expression.hpp"
#include "dedekind/integration.hpp"

using namespace dedekind;
using json = nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kInternal = 1;
constexpr int kUsage = 2;
constexpr int kGuard = 3;
constexpr int kExhausted = 4;

std::string scaled_text(const Integer& m, int digits) {
  std::string s = Integer(abs(m)).get_str();
  if (digits > 0) {
    if (static_cast<int>(s.size()) <= digits) s.insert(0, digits + 1 - s.size(), '0');
    s.insert(s.size() - digits, ".");
  }
  return (m < 0 ? "-" : "") + s;
}

// Outward decimal rendering of an enclosure.
std::string decimal_interval(const RatInterval& iv, int digits) {
  const Rational scale = pow10(digits);
  const Integer lo = (iv.lo() * scale).floor();
  const Integer hi = (iv.hi() * scale).ceil();
  return "[" + scaled_text(lo, digits) + ", " + scaled_text(hi, digits) + "]";
}

void print_enclosure(const RatInterval& iv, int digits) {
  std::cout << "[" << iv.lo().fraction_str() << ", " << iv.hi().fraction_str() << "]\n";
  std::cout << decimal_interval(iv, digits) << "\n";
}

int digits_for(const Rational& eps) {
  int d = 0;
  while (pow10(-d) > eps && d < 60) ++d;
  return d + 1;
}

json trace_json(const Trace& t) {
  auto strs = [](const std::vector<Rational>& v) {
    json a = json::array();
    for (const Rational& q : v) a.push_back(q.fraction_str());
    return a;
  };
  return json{{"levels", strs(t.levels)},
              {"superlevel_bounds", strs(t.superlevel_bounds)},
              {"sublevel_bounds", strs(t.sublevel_bounds)},
              {"lower_sum", t.lower_sum.fraction_str()},
              {"upper_sum", t.upper_sum.fraction_str()},
              {"total_mass", t.total_mass.fraction_str()}};
}

Rational rational_arg(const std::string& s, const char* what) {
  try {
    return Rational::parse(s);
  } catch (const std::exception&) {
    throw CLI::ValidationError(what, "not a rational: " + s);
  }
}

struct Options {
  std::string expr;
  std::string eps = "1e-6";
  int digits = -1;
  std::string from, to;
  std::vector<std::string> at;
  std::string trace;
  int max_depth = IntegrationOptions{}.max_depth;
  unsigned long seed = 0;
};

int cmd_eval(const Options& o) {
  const int d = o.digits < 0 ? 6 : o.digits;
  const Expr e = parse_expression(o.expr);
  const Real x = to_real(e, pow10(-(d + 1)) / Rational(10));
  Decimal dec;
  for (int extra : {1, 3, 6, 10}) {
    dec = to_decimal(x.approx(pow10(-(d + extra))), d);
    if (!dec.last_digit_uncertain) break;
  }
  std::cout << dec.text << (dec.last_digit_uncertain ? "~" : "") << "\n";
  return kOk;
}

int cmd_integrate(const Options& o) {
  const Rational eps = rational_arg(o.eps, "--eps");
  const Rational a = rational_arg(o.from, "--from");
  const Rational b = rational_arg(o.to, "--to");
  const Expr e = parse_expression(o.expr);
  const RealFunc f = to_func(e, RatInterval(min(a, b), max(a, b)), eps / Rational(10));
  IntegrationOptions opts;
  opts.max_depth = o.max_depth;
  opts.record_trace = !o.trace.empty();
  const Enclosure r = integrate_oriented(f, Real(a), Real(b), eps, opts);
  print_enclosure(r.interval(), o.digits < 0 ? digits_for(eps) : o.digits);
  if (!o.trace.empty()) {
    json j = r.trace ? trace_json(*r.trace) : json::object();
    j["orientation"] = b < a ? -1 : 1;
    j["negative_part"] = r.negative_trace ? trace_json(*r.negative_trace) : json(nullptr);
    std::ofstream out(o.trace);
    if (!out) throw std::runtime_error("cannot write " + o.trace);
    out << j.dump(2) << "\n";
  }
  if (r.exhausted) {
    std::cerr << "refinement budget exhausted before reaching --eps\n";
    return kExhausted;
  }
  return kOk;
}

int cmd_slope(const Options& o, bool diagonal) {
  const Rational eps = rational_arg(o.eps, "--eps");
  const Rational x = rational_arg(o.at.at(0), "--at");
  const Rational y = diagonal ? x : rational_arg(o.at.at(1), "--at");
  const Expr e = parse_expression(o.expr);
  const Slope s = to_slope(e, RatInterval(min(x, y), max(x, y)), eps / Rational(10));
  print_enclosure(s.eval(Real(x), Real(y), eps), o.digits < 0 ? digits_for(eps) : o.digits);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified real integration and differentiation"};
  app.require_subcommand(1);
  Options o;

  auto* eval = app.add_subcommand("eval", "Evaluate a closed expression to --digits places");
  auto* integ = app.add_subcommand("integrate", "Enclose the integral of an expression in t");
  auto* slope = app.add_subcommand("slope", "Enclose the slope of an expression in x at (x, y)");
  auto* deriv = app.add_subcommand("derivative", "Enclose the derivative of an expression in x");

  for (auto* sub : {eval, integ, slope, deriv}) {
    sub->add_option("expr", o.expr, "Expression")->required();
    sub->add_option("--digits", o.digits, "Decimal places to print");
    sub->add_option("--seed", o.seed, "Accepted for the property-test runner; unused here");
  }
  for (auto* sub : {integ, slope, deriv}) sub->add_option("--eps", o.eps, "Enclosure width");
  integ->add_option("--from", o.from, "Lower limit")->required();
  integ->add_option("--to", o.to, "Upper limit")->required();
  integ->add_option("--trace", o.trace, "Write the level-set trace as JSON to this file");
  integ->add_option("--max-depth", o.max_depth, "Bisection depth limit");
  slope->add_option("--at", o.at, "Points x y")->expected(2)->required();
  deriv->add_option("--at", o.at, "Point x")->expected(1)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*eval) return cmd_eval(o);
    if (*integ) return cmd_integrate(o);
    if (*slope) return cmd_slope(o, false);
    return cmd_slope(o, true);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const BudgetExhausted& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    print_enclosure(e.best(), 6);
    return kExhausted;
  } catch (const LevelsTooLow& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const NotSeparatedFromZero& e) {
    std::cerr << "guard violation: " << e.what() << "\n";
    return kGuard;
  } catch (const NotSeparatedFromOne& e) {
    std::cerr << "guard violation: " << e.what() << "\n";
    return kGuard;
  } catch (const DomainError& e) {
    std::cerr << "guard violation: " << e.what() << "\n";
    return kGuard;
  } catch (const InvalidIntervalOrder& e) {
    std::cerr << "guard violation: " << e.what() << "\n";
    return kGuard;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
