#include "dedekind/real_func.hpp"

#include <stdexcept>

namespace dedekind {

struct RealFunc::Node {
  Kind kind = Kind::Const;
  Rational q;           // Const value, Recip separation
  Real r;               // ConstReal value
  unsigned n = 0;       // PowInt exponent
  RealFunc a, b;        // children
  std::shared_ptr<const UnaryOp> op;
};

namespace {

const RatInterval kZero{Rational(0)};
const RatInterval kOne{Rational(1)};

}  // namespace

RealFunc::RealFunc() : node_(nullptr) {}

RealFunc RealFunc::constant(const Rational& c) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->q = c;
  return RealFunc(std::move(n));
}

RealFunc RealFunc::constant(const Real& c) {
  if (c.exact()) return constant(*c.exact());
  auto n = std::make_shared<Node>();
  n->kind = Kind::ConstReal;
  n->r = c;
  return RealFunc(std::move(n));
}

RealFunc RealFunc::identity() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  return RealFunc(std::move(n));
}

RealFunc::Kind RealFunc::kind() const { return node_ ? node_->kind : Kind::Const; }

const RealFunc& RealFunc::lhs() const {
  if (!node_) throw std::logic_error("RealFunc::lhs on a leaf");
  return node_->a;
}

const RealFunc& RealFunc::rhs() const {
  if (!node_) throw std::logic_error("RealFunc::rhs on a leaf");
  return node_->b;
}

RealFunc operator+(const RealFunc& f, const RealFunc& g) {
  auto n = std::make_shared<RealFunc::Node>();
  n->kind = RealFunc::Kind::Add;
  n->a = f;
  n->b = g;
  return RealFunc(std::move(n));
}

RealFunc operator-(const RealFunc& f, const RealFunc& g) {
  auto n = std::make_shared<RealFunc::Node>();
  n->kind = RealFunc::Kind::Sub;
  n->a = f;
  n->b = g;
  return RealFunc(std::move(n));
}

RealFunc operator-(const RealFunc& f) {
  auto n = std::make_shared<RealFunc::Node>();
  n->kind = RealFunc::Kind::Neg;
  n->a = f;
  return RealFunc(std::move(n));
}

RealFunc operator*(const RealFunc& f, const RealFunc& g) {
  auto n = std::make_shared<RealFunc::Node>();
  n->kind = RealFunc::Kind::Mul;
  n->a = f;
  n->b = g;
  return RealFunc(std::move(n));
}

RealFunc tminus(const RealFunc& f, const RealFunc& g) {
  auto n = std::make_shared<RealFunc::Node>();
  n->kind = RealFunc::Kind::TMinus;
  n->a = f;
  n->b = g;
  return RealFunc(std::move(n));
}

RealFunc min(const RealFunc& f, const RealFunc& g) {
  auto n = std::make_shared<RealFunc::Node>();
  n->kind = RealFunc::Kind::Min;
  n->a = f;
  n->b = g;
  return RealFunc(std::move(n));
}

RealFunc max(const RealFunc& f, const RealFunc& g) {
  auto n = std::make_shared<RealFunc::Node>();
  n->kind = RealFunc::Kind::Max;
  n->a = f;
  n->b = g;
  return RealFunc(std::move(n));
}

RealFunc recip(const RealFunc& f, const Rational& sep) {
  if (sep.sign() <= 0) throw std::invalid_argument("recip: separation must be positive");
  auto n = std::make_shared<RealFunc::Node>();
  n->kind = RealFunc::Kind::Recip;
  n->a = f;
  n->q = sep;
  return RealFunc(std::move(n));
}

RealFunc pow_int(const RealFunc& f, unsigned k) {
  auto n = std::make_shared<RealFunc::Node>();
  n->kind = RealFunc::Kind::PowInt;
  n->a = f;
  n->n = k;
  return RealFunc(std::move(n));
}

RealFunc compose(const RealFunc& outer, const RealFunc& inner) {
  auto n = std::make_shared<RealFunc::Node>();
  n->kind = RealFunc::Kind::Compose;
  n->a = outer;
  n->b = inner;
  return RealFunc(std::move(n));
}

RealFunc apply(std::shared_ptr<const UnaryOp> op, const RealFunc& arg) {
  if (!op) throw std::invalid_argument("apply: null operation");
  auto n = std::make_shared<RealFunc::Node>();
  n->kind = RealFunc::Kind::Apply;
  n->a = arg;
  n->op = std::move(op);
  return RealFunc(std::move(n));
}

Real RealFunc::operator()(const Real& x) const {
  if (!node_) return Real(Rational(0));
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Const: return Real(n.q);
    case Kind::ConstReal: return n.r;
    case Kind::Var: return x;
    case Kind::Add: return n.a(x) + n.b(x);
    case Kind::Sub: return n.a(x) - n.b(x);
    case Kind::Neg: return -n.a(x);
    case Kind::Mul: return n.a(x) * n.b(x);
    case Kind::TMinus: return tminus(n.a(x), n.b(x));
    case Kind::Min: return min(n.a(x), n.b(x));
    case Kind::Max: return max(n.a(x), n.b(x));
    case Kind::Recip: return recip(n.a(x), n.q);
    case Kind::PowInt: return pow_int(n.a(x), n.n);
    case Kind::Compose: return n.a(n.b(x));
    case Kind::Apply: return n.op->apply(n.a(x));
  }
  throw std::logic_error("RealFunc: unknown node");
}

RatInterval RealFunc::range(const RatInterval& j, const Rational& tol) const {
  if (!node_) return kZero;
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Const: return RatInterval(n.q);
    case Kind::ConstReal: return n.r.approx(tol);
    case Kind::Var: return j;
    case Kind::Add: return n.a.range(j, tol) + n.b.range(j, tol);
    case Kind::Sub: return n.a.range(j, tol) - n.b.range(j, tol);
    case Kind::Neg: return -n.a.range(j, tol);
    case Kind::Mul: return n.a.range(j, tol) * n.b.range(j, tol);
    case Kind::TMinus: return tminus(n.a.range(j, tol), n.b.range(j, tol));
    case Kind::Min: return min(n.a.range(j, tol), n.b.range(j, tol));
    case Kind::Max: return max(n.a.range(j, tol), n.b.range(j, tol));
    case Kind::Recip: return recip(n.a.range(j, tol));
    case Kind::PowInt: return pow_int(n.a.range(j, tol), n.n);
    case Kind::Compose: return n.a.range(n.b.range(j, tol), tol);
    case Kind::Apply: return n.op->range(n.a.range(j, tol), tol);
  }
  throw std::logic_error("RealFunc: unknown node");
}

namespace {

// Slope rule shared by max(f, g) and min(f, g): when one side dominates on
// the whole interval its slope is used, otherwise the hull of both.
RatInterval select_slope(const Jet& f, const Jet& g, bool want_max) {
  const bool f_wins = want_max ? g.value.hi() < f.value.lo() : f.value.hi() < g.value.lo();
  const bool g_wins = want_max ? f.value.hi() < g.value.lo() : g.value.hi() < f.value.lo();
  if (f_wins) return f.slope;
  if (g_wins) return g.slope;
  return hull(f.slope, g.slope);
}

}  // namespace

Jet RealFunc::jet(const RatInterval& j, const Rational& tol) const {
  if (!node_) return {kZero, kZero};
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Const: return {RatInterval(n.q), kZero};
    case Kind::ConstReal: return {n.r.approx(tol), kZero};
    case Kind::Var: return {j, kOne};
    case Kind::Add: {
      const Jet f = n.a.jet(j, tol), g = n.b.jet(j, tol);
      return {f.value + g.value, f.slope + g.slope};
    }
    case Kind::Sub: {
      const Jet f = n.a.jet(j, tol), g = n.b.jet(j, tol);
      return {f.value - g.value, f.slope - g.slope};
    }
    case Kind::Neg: {
      const Jet f = n.a.jet(j, tol);
      return {-f.value, -f.slope};
    }
    case Kind::Mul: {
      const Jet f = n.a.jet(j, tol), g = n.b.jet(j, tol);
      return {f.value * g.value, f.slope * g.value + f.value * g.slope};
    }
    case Kind::TMinus: {
      const Jet f = n.a.jet(j, tol), g = n.b.jet(j, tol);
      const RatInterval h = f.value - g.value;
      const RatInterval dh = f.slope - g.slope;
      if (h.lo().sign() > 0) return {h, dh};
      if (h.hi().sign() <= 0) return {kZero, kZero};
      return {RatInterval(Rational(0), h.hi()), hull(kZero, dh)};
    }
    case Kind::Min: {
      const Jet f = n.a.jet(j, tol), g = n.b.jet(j, tol);
      return {min(f.value, g.value), select_slope(f, g, false)};
    }
    case Kind::Max: {
      const Jet f = n.a.jet(j, tol), g = n.b.jet(j, tol);
      return {max(f.value, g.value), select_slope(f, g, true)};
    }
    case Kind::Recip: {
      const Jet f = n.a.jet(j, tol);
      const RatInterval inv = recip(f.value);
      return {inv, -(f.slope * pow_int(inv, 2))};
    }
    case Kind::PowInt: {
      if (n.n == 0) return {kOne, kZero};
      const Jet f = n.a.jet(j, tol);
      const RatInterval d = Rational(static_cast<long>(n.n)) * pow_int(f.value, n.n - 1);
      return {pow_int(f.value, n.n), d * f.slope};
    }
    case Kind::Compose: {
      const Jet inner = n.b.jet(j, tol);
      const Jet outer = n.a.jet(inner.value, tol);
      return {outer.value, outer.slope * inner.slope};
    }
    case Kind::Apply: {
      const Jet arg = n.a.jet(j, tol);
      return {n.op->range(arg.value, tol), n.op->deriv_range(arg.value, tol) * arg.slope};
    }
  }
  throw std::logic_error("RealFunc: unknown node");
}

std::optional<Jet2> RealFunc::jet2(const RatInterval& j, const Rational& tol) const {
  if (!node_) return Jet2{kZero, kZero, kZero};
  const Node& n = *node_;
  auto both = [&](auto&& fn) -> std::optional<Jet2> {
    const auto f = n.a.jet2(j, tol);
    if (!f) return std::nullopt;
    const auto g = n.b.jet2(j, tol);
    if (!g) return std::nullopt;
    return fn(*f, *g);
  };
  switch (n.kind) {
    case Kind::Const: return Jet2{RatInterval(n.q), kZero, kZero};
    case Kind::ConstReal: return Jet2{n.r.approx(tol), kZero, kZero};
    case Kind::Var: return Jet2{j, kOne, kZero};
    case Kind::Add:
      return both([](const Jet2& f, const Jet2& g) {
        return Jet2{f.value + g.value, f.d1 + g.d1, f.d2 + g.d2};
      });
    case Kind::Sub:
      return both([](const Jet2& f, const Jet2& g) {
        return Jet2{f.value - g.value, f.d1 - g.d1, f.d2 - g.d2};
      });
    case Kind::Neg: {
      const auto f = n.a.jet2(j, tol);
      if (!f) return std::nullopt;
      return Jet2{-f->value, -f->d1, -f->d2};
    }
    case Kind::Mul:
      return both([](const Jet2& f, const Jet2& g) {
        return Jet2{f.value * g.value, f.d1 * g.value + f.value * g.d1,
                    f.d2 * g.value + Rational(2) * (f.d1 * g.d1) + f.value * g.d2};
      });
    case Kind::TMinus:
    case Kind::Min:
    case Kind::Max: {
      // smooth only where one branch is selected on all of j
      const Jet f = n.a.jet(j, tol), g = n.b.jet(j, tol);
      if (n.kind == Kind::TMinus) {
        const RatInterval h = f.value - g.value;
        if (h.hi().sign() <= 0) return Jet2{kZero, kZero, kZero};
        if (h.lo().sign() <= 0) return std::nullopt;
        return both([](const Jet2& p, const Jet2& q) {
          return Jet2{p.value - q.value, p.d1 - q.d1, p.d2 - q.d2};
        });
      }
      const bool want_max = n.kind == Kind::Max;
      const bool f_wins = want_max ? g.value.hi() < f.value.lo() : f.value.hi() < g.value.lo();
      const bool g_wins = want_max ? f.value.hi() < g.value.lo() : g.value.hi() < f.value.lo();
      if (f_wins) return n.a.jet2(j, tol);
      if (g_wins) return n.b.jet2(j, tol);
      return std::nullopt;
    }
    case Kind::Recip: {
      const auto f = n.a.jet2(j, tol);
      if (!f) return std::nullopt;
      const RatInterval inv = recip(f->value);
      const RatInterval inv2 = pow_int(inv, 2);
      return Jet2{inv, -(f->d1 * inv2),
                  Rational(2) * (pow_int(f->d1, 2) * pow_int(inv, 3)) - f->d2 * inv2};
    }
    case Kind::PowInt: {
      if (n.n == 0) return Jet2{kOne, kZero, kZero};
      const auto f = n.a.jet2(j, tol);
      if (!f) return std::nullopt;
      if (n.n == 1) return f;
      const Rational k(static_cast<long>(n.n));
      const RatInterval dk = k * pow_int(f->value, n.n - 1);
      const RatInterval ddk = (k * Rational(static_cast<long>(n.n - 1))) * pow_int(f->value, n.n - 2);
      return Jet2{pow_int(f->value, n.n), dk * f->d1, ddk * pow_int(f->d1, 2) + dk * f->d2};
    }
    case Kind::Compose: {
      const auto inner = n.b.jet2(j, tol);
      if (!inner) return std::nullopt;
      const auto outer = n.a.jet2(inner->value, tol);
      if (!outer) return std::nullopt;
      return Jet2{outer->value, outer->d1 * inner->d1,
                  outer->d2 * pow_int(inner->d1, 2) + outer->d1 * inner->d2};
    }
    case Kind::Apply: {
      const auto arg = n.a.jet2(j, tol);
      if (!arg) return std::nullopt;
      const auto dd = n.op->deriv2_range(arg->value, tol);
      if (!dd) return std::nullopt;
      const RatInterval d = n.op->deriv_range(arg->value, tol);
      return Jet2{n.op->range(arg->value, tol), d * arg->d1, *dd * pow_int(arg->d1, 2) + d * arg->d2};
    }
  }
  throw std::logic_error("RealFunc: unknown node");
}

std::string RealFunc::str() const {
  if (!node_) return "0";
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Const: return n.q.sign() < 0 ? "(" + n.q.str() + ")" : n.q.str();
    case Kind::ConstReal: return "c";
    case Kind::Var: return "t";
    case Kind::Add: return "(" + n.a.str() + " + " + n.b.str() + ")";
    case Kind::Sub: return "(" + n.a.str() + " - " + n.b.str() + ")";
    case Kind::Neg: return "-" + n.a.str();
    case Kind::Mul: return "(" + n.a.str() + " * " + n.b.str() + ")";
    case Kind::TMinus: return "tminus(" + n.a.str() + ", " + n.b.str() + ")";
    case Kind::Min: return "min(" + n.a.str() + ", " + n.b.str() + ")";
    case Kind::Max: return "max(" + n.a.str() + ", " + n.b.str() + ")";
    case Kind::Recip: return "(1 / " + n.a.str() + ")";
    case Kind::PowInt: return n.a.str() + "^" + std::to_string(n.n);
    case Kind::Compose: return n.a.str() + " o " + n.b.str();
    case Kind::Apply: return n.op->name() + "(" + n.a.str() + ")";
  }
  return "?";
}

}  // namespace dedekind
