#include "dedekind/integration.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>

namespace dedekind {

// ---------------------------------------------------------------- partitions

Partition::Partition(std::vector<Rational> levels) : levels_(std::move(levels)) {
  if (levels_.size() < 2) throw std::invalid_argument("partition needs at least two levels");
  if (!levels_.front().is_zero()) throw std::invalid_argument("partition must start at 0");
  for (std::size_t i = 1; i < levels_.size(); ++i) {
    if (!(levels_[i - 1] < levels_[i])) {
      throw std::invalid_argument("partition levels must be strictly increasing");
    }
  }
}

Partition Partition::arithmetic(const Rational& top, std::size_t n) {
  if (n == 0) throw std::invalid_argument("partition needs n >= 1");
  std::vector<Rational> levels;
  levels.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    levels.push_back(top * Rational(static_cast<long>(i)) / Rational(static_cast<long>(n)));
  }
  return Partition(std::move(levels));
}

Partition Partition::refine(const Partition& other) const {
  std::vector<Rational> all = levels_;
  all.insert(all.end(), other.levels_.begin(), other.levels_.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return Partition(std::move(all));
}

Rational choquet_lower(const Partition& p, const std::function<Rational(const Rational&)>& above) {
  Rational sum;
  const auto& r = p.levels();
  for (std::size_t i = 1; i < r.size(); ++i) sum += (r[i] - r[i - 1]) * above(r[i]);
  return sum;
}

Rational choquet_upper(const Partition& p, const Rational& total_mass,
                       const std::function<Rational(const Rational&)>& below) {
  Rational sum;
  const auto& r = p.levels();
  for (std::size_t i = 1; i < r.size(); ++i) {
    sum += (r[i] - r[i - 1]) * (total_mass - below(r[i - 1]));
  }
  return sum;
}

namespace {

using Kind = CellDensity::Kind;

constexpr double kInf = std::numeric_limits<double>::infinity();

double to_d(const Rational& q) { return q.to_double(); }

// One piece [a, b] of the bounding box. Besides the natural range `v`, a cell
// keeps the value at its left end and a slope enclosure, which give the
// linear envelopes
//   lower(s) = max(v.lo, va.lo + d.lo * s),  upper(s) = min(v.hi, va.hi + d.hi * s)
// for s = t - a in [0, h].
struct Cell {
  Rational a, b, h;
  Kind kind = Kind::Zero;
  Rational c_lo, c_hi;
  RatInterval v, va, d;
  // Dense cells of twice differentiable f: enclosure of the Lebesgue integral
  // of f over the cell, h f(m) + [f''] h^3 / 24.
  std::optional<RatInterval> quad;
  bool failed = false;
  std::exception_ptr error;
  double mu_ub = 0;  // generic cells: upper bound on mu([a, b])
  int depth = 0;
  double err = 0;

  bool has_values() const { return kind != Kind::Zero && !failed; }

  // Smallest value of the lower envelope.
  Rational lower_min() const {
    const Rational& beta = d.lo();
    const Rational lin_min = va.lo() + min(Rational(0), beta * h);
    return max(v.lo(), lin_min);
  }

  // Largest value of the upper envelope.
  Rational upper_max() const {
    const Rational& beta = d.hi();
    const Rational lin_max = va.hi() + max(Rational(0), beta * h);
    return min(v.hi(), lin_max);
  }

  // Length of { s : lower(s) > r }.
  Rational len_above(const Rational& r) const {
    if (r < v.lo()) return h;
    const Rational& beta = d.lo();
    const Rational& base = va.lo();
    if (beta.is_zero()) return base > r ? h : Rational(0);
    const Rational top = base + max(Rational(0), beta * h);
    return std::clamp((top - r) / beta.abs(), Rational(0), h);
  }

  // Length of { s : upper(s) < r }.
  Rational len_below(const Rational& r) const {
    if (r > v.hi()) return h;
    const Rational& beta = d.hi();
    const Rational& base = va.hi();
    if (beta.is_zero()) return base < r ? h : Rational(0);
    const Rational bottom = base + min(Rational(0), beta * h);
    return std::clamp((r - bottom) / beta.abs(), Rational(0), h);
  }

  // sum_{i=1..n} len_above(i * r1), in closed form.
  Rational sum_above(const Rational& r1, const Integer& n) const {
    const Integer full = count_below(v.lo(), r1, 1, n);
    Rational total = Rational(full) * h;
    const Integer p0 = full + 1;
    if (p0 > n) return total;
    const Rational& beta = d.lo();
    const Rational& base = va.lo();
    if (beta.is_zero()) return total + Rational(count_below(base, r1, p0, n)) * h;
    const Rational abs_beta = beta.abs();
    const Rational top = base + max(Rational(0), beta * h);
    const Rational flat = top - abs_beta * h;
    const Integer f2 = count_at_most(flat, r1, p0, n);
    total += Rational(f2) * h;
    const Integer q0 = p0 + f2;
    Integer q1 = (top / r1).ceil() - 1;
    if (q1 > n) q1 = n;
    if (q1 >= q0) {
      const Rational cnt(Integer(q1 - q0 + 1));
      const Rational sum_i = Rational(Integer(q0 + q1)) * cnt / Rational(2);
      total += (cnt * top - r1 * sum_i) / abs_beta;
    }
    return total;
  }

  // sum_{k=0..n-1} len_below(k * r1), in closed form.
  Rational sum_below(const Rational& r1, const Integer& n) const {
    const Integer last_level = n - 1;
    const Integer kk = count_at_most(v.hi(), r1, 0, last_level);
    Rational total = Rational(Integer(n - kk)) * h;
    const Integer last = kk - 1;
    if (last < 0) return total;
    const Rational& beta = d.hi();
    const Rational& base = va.hi();
    if (beta.is_zero()) {
      const Integer above = (last + 1) - count_at_most(base, r1, 0, last);
      return total + Rational(above) * h;
    }
    const Rational abs_beta = beta.abs();
    const Rational bottom = base + min(Rational(0), beta * h);
    const Rational roof = bottom + abs_beta * h;
    const Integer full = (last + 1) - count_below(roof, r1, 0, last);
    total += Rational(full) * h;
    Integer k0 = (bottom / r1).floor() + 1;
    if (k0 < 0) k0 = 0;
    Integer k1 = (roof / r1).ceil() - 1;
    if (k1 > last) k1 = last;
    if (k1 >= k0) {
      const Rational cnt(Integer(k1 - k0 + 1));
      const Rational sum_k = Rational(Integer(k0 + k1)) * cnt / Rational(2);
      total += (r1 * sum_k - cnt * bottom) / abs_beta;
    }
    return total;
  }
};

struct BuildParams {
  Rational tol_f;  // accuracy of transcendental endpoint values
  Rational tol_c;  // accuracy of measure and carrier queries
  double target = 0;
  const IntegrationOptions* opts = nullptr;
};

// f at a point to width tol. Op tolerances are local, so compositions can
// magnify them; tighten the op tolerance (returned in t) until the result
// itself is narrow enough.
RatInterval point_value(const RealFunc& f, const Rational& q, const Rational& tol, Rational& t) {
  RatInterval r = f.range(RatInterval(q), t);
  for (int i = 0; i < 6 && r.width() > tol; ++i) {
    t *= max(tol / (Rational(4) * r.width()), pow2(-24));
    r = f.range(RatInterval(q), t);
  }
  return r;
}

Cell make_cell(const RealFunc& f, const Valuation& mu, Rational a, Rational b, int depth,
               const BuildParams& bp) {
  Cell c;
  c.a = std::move(a);
  c.b = std::move(b);
  c.h = c.b - c.a;
  c.depth = depth;
  const CellDensity dens = mu.density(c.a, c.b, bp.tol_c);
  c.kind = dens.kind;
  c.c_lo = dens.lo;
  c.c_hi = dens.hi;
  if (c.kind == Kind::Zero) return c;
  try {
    const RatInterval cell(c.a, c.b);
    Rational t = bp.tol_f;
    c.va = point_value(f, c.a, bp.tol_f, t);
    // the same magnification applies to the cell-wide bounds
    const Rational shrink = t / bp.tol_f;
    // The second derivative enters as h^3 / 24 f'', so it needs far less
    // accuracy than the midpoint value: slack tol_cell adds h tol_f / 16.
    const Rational tol_cell =
        shrink * max(bp.tol_f, min(pow2(-8), bp.tol_f * Rational(3, 2) / (c.h * c.h)));
    const auto j2 = c.kind == Kind::Dense ? f.jet2(cell, tol_cell) : std::nullopt;
    if (j2) {
      c.v = j2->value;
      c.d = j2->d1;
      const RatInterval fm = point_value(f, (c.a + c.b) / Rational(2), bp.tol_f, t);
      c.quad = c.h * fm + (c.h * c.h * c.h / Rational(24)) * j2->d2;
    } else {
      const Jet j = f.jet(cell, t);
      c.v = j.value;
      c.d = j.slope;
    }
    if (c.va.overlaps(c.v)) c.va = intersect(c.va, c.v);
  } catch (const BudgetExhausted&) {
    throw;
  } catch (const Error&) {
    c.failed = true;
    c.error = std::current_exception();
  }
  if (c.kind == Kind::Generic) c.mu_ub = to_d(mu.measure_ub_closed(c.a, c.b, bp.tol_c));
  return c;
}

// Error estimate used while integrating: weighted area between the envelopes.
double integral_error(const Cell& c) {
  if (c.kind == Kind::Zero) return 0;
  if (c.failed) return kInf;
  if (c.kind == Kind::Dense) {
    const double h = to_d(c.h);
    const double by_range = h * to_d(c.v.width());
    const double by_slope = h * to_d(c.va.width()) + to_d(c.d.width()) * h * h / 2;
    double best = std::min(by_range, by_slope);
    if (c.quad) best = std::min(best, to_d(c.quad->width()));
    return to_d(c.c_hi) * best;
  }
  const double spread = to_d(c.upper_max() - c.lower_min());
  return c.mu_ub * std::max(spread, 0.0);
}

// Error estimate for a single level r: mass of the points where the envelopes
// cannot tell f > r from f < r.
double level_error(const Cell& c, const Rational& r) {
  if (c.kind == Kind::Zero) return 0;
  if (c.failed) return kInf;
  if (c.kind == Kind::Dense) {
    const Rational unsure = c.h - c.len_above(r) - c.len_below(r);
    return to_d(c.c_hi) * std::max(to_d(unsure), 0.0);
  }
  if (c.lower_min() > r || c.upper_max() < r) return 0;
  return c.mu_ub;
}

struct CellSet {
  std::vector<Cell> cells;  // sorted, covering the box
  bool exhausted = false;
};

CellSet build_cells(const RealFunc& f, const Valuation& mu, const RatInterval& box,
                    const BuildParams& bp, const std::function<double(const Cell&)>& err_fn) {
  const IntegrationOptions& opts = *bp.opts;
  std::vector<Cell> pool;
  std::vector<bool> alive;
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry> queue;
  double total = 0;
  std::size_t failed = 0;
  std::size_t live = 0;

  auto add = [&](Cell c) {
    c.err = err_fn(c);
    if (c.err == kInf) {
      ++failed;
    } else {
      total += c.err;
    }
    pool.push_back(std::move(c));
    alive.push_back(true);
    ++live;
    queue.emplace(pool.back().err, pool.size() - 1);
  };
  auto remove = [&](std::size_t idx) {
    alive[idx] = false;
    --live;
    if (pool[idx].err == kInf) {
      --failed;
    } else {
      total -= pool[idx].err;
    }
  };

  add(make_cell(f, mu, box.lo(), box.hi(), 0, bp));
  CellSet out;
  std::size_t splits = 0;
  while (!queue.empty() && (failed > 0 || total > bp.target)) {
    const auto [err, idx] = queue.top();
    queue.pop();
    if (!alive[idx]) continue;
    if (err <= 0) break;
    const Cell& c = pool[idx];
    if (c.depth >= opts.max_depth || live + 1 > opts.max_cells) {
      out.exhausted = true;
      break;
    }
    const Rational a = c.a, b = c.b;
    const Rational m = (a + b) / Rational(2);
    const int depth = c.depth + 1;
    remove(idx);
    add(make_cell(f, mu, a, m, depth, bp));
    add(make_cell(f, mu, m, b, depth, bp));
    if (++splits % 512 == 0) {
      total = 0;
      for (std::size_t i = 0; i < pool.size(); ++i) {
        if (alive[i] && pool[i].err != kInf) total += pool[i].err;
      }
    }
  }
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (!alive[i]) continue;
    if (pool[i].failed) std::rethrow_exception(pool[i].error);
    out.cells.push_back(std::move(pool[i]));
  }
  std::sort(out.cells.begin(), out.cells.end(),
            [](const Cell& p, const Cell& q) { return p.a < q.a; });
  return out;
}

// Measures of maximal runs of touching generic cells, with caching. Cells in
// a run that are all certified above (or below) a level form one open
// interval, so a point mass sitting on a shared endpoint is not lost.
class GenericRuns {
 public:
  GenericRuns(const std::vector<Cell>& cells, const Valuation& mu, Rational tol)
      : cells_(cells), mu_(mu), tol_(std::move(tol)) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i].kind == Kind::Generic) generic_.push_back(i);
    }
  }

  const std::vector<std::size_t>& indices() const { return generic_; }

  // Lower bound on mu of the union of the active generic cells' interiors.
  Rational measure(const std::vector<bool>& active) {
    Rational total;
    std::size_t i = 0;
    while (i < cells_.size()) {
      if (!active[i]) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j + 1 < cells_.size() && active[j + 1] && cells_[j].b == cells_[j + 1].a) ++j;
      total += run_measure(i, j);
      i = j + 1;
    }
    return total;
  }

 private:
  Rational run_measure(std::size_t i, std::size_t j) {
    const auto key = std::make_pair(i, j);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Rational m = mu_.measure_lb(cells_[i].a, cells_[j].b, tol_);
    memo_.emplace(key, m);
    return m;
  }

  const std::vector<Cell>& cells_;
  const Valuation& mu_;
  Rational tol_;
  std::vector<std::size_t> generic_;
  std::map<std::pair<std::size_t, std::size_t>, Rational> memo_;
};

// Lower bound on mu{f > r} from the cells.
Rational superlevel_from_cells(const std::vector<Cell>& cells, GenericRuns& runs,
                               const Rational& r) {
  Rational total;
  std::vector<bool> active(cells.size(), false);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Cell& c = cells[i];
    if (c.kind == Kind::Dense && c.c_lo.sign() > 0) total += c.c_lo * c.len_above(r);
    if (c.kind == Kind::Generic) active[i] = c.lower_min() > r;
  }
  return total + runs.measure(active);
}

// Lower bound on mu{f < r} from the cells.
Rational sublevel_from_cells(const std::vector<Cell>& cells, GenericRuns& runs,
                             const Rational& r) {
  Rational total;
  std::vector<bool> active(cells.size(), false);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Cell& c = cells[i];
    if (c.kind == Kind::Dense && c.c_lo.sign() > 0) total += c.c_lo * c.len_below(r);
    if (c.kind == Kind::Generic) active[i] = c.upper_max() < r;
  }
  return total + runs.measure(active);
}

struct Box {
  RatInterval box;
  bool empty = false;  // certified zero total mass with no room for atoms
};

Box bounding_box(const Valuation& mu, const Rational& tol) {
  const RatInterval xs = mu.carrier_lo().approx(tol);
  const RatInterval ys = mu.carrier_hi().approx(tol);
  const Rational lo = min(xs.lo(), ys.lo());
  const Rational hi = max(xs.hi(), ys.hi());
  if (mu.atomless(tol)) {
    if (lo == hi) return {RatInterval(lo), true};
    return {RatInterval(lo, hi), false};
  }
  const Rational scale = max(Rational(1), max(lo.abs(), hi.abs()));
  const Rational pad = max((hi - lo) * pow2(-10), scale * pow2(-30));
  return {RatInterval(lo - pad, hi + pad), false};
}

struct RoundResult {
  Rational lo, hi;
  Rational r_n;
  Rational mass_hi;
  bool exhausted = false;
  std::optional<Trace> trace;
};

Trace make_trace(const std::vector<Cell>& cells, GenericRuns& runs, const Rational& r_n,
                 const Integer& n, const Rational& mass_hi, long bits, std::size_t cap) {
  Trace t;
  Integer levels = n;
  if (levels > Integer(static_cast<unsigned long>(cap))) levels = Integer(static_cast<unsigned long>(cap));
  const long count = levels.get_si();
  const Rational step = r_n / Rational(count);
  for (long i = 0; i <= count; ++i) t.levels.push_back(step * Rational(i));
  t.total_mass = mass_hi;
  for (long i = 1; i <= count; ++i) {
    const Rational m = round_down(superlevel_from_cells(cells, runs, t.levels[i]), bits);
    t.superlevel_bounds.push_back(m);
    t.lower_sum += step * m;
  }
  for (long k = 0; k < count; ++k) {
    const Rational m = round_down(sublevel_from_cells(cells, runs, t.levels[k]), bits);
    t.sublevel_bounds.push_back(m);
    t.upper_sum += step * (mass_hi - m);
  }
  return t;
}

// One pass of the integrator at fixed tolerances.
RoundResult integrate_round(const RealFunc& f, const Valuation& mu, const Rational& eps,
                            const BuildParams& bp, const RatInterval& box) {
  const IntegrationOptions& opts = *bp.opts;
  CellSet set = build_cells(f, mu, box, bp, integral_error);
  const auto& cells = set.cells;
  RoundResult res;
  res.exhausted = set.exhausted;
  res.mass_hi = mu.total_mass().approx(bp.tol_c).hi();
  GenericRuns runs(cells, mu, bp.tol_c);

  Rational top;
  bool any = false;
  for (const Cell& c : cells) {
    if (!c.has_values()) continue;
    if (c.v.hi().sign() < 0) {
      const bool charged = c.kind == Kind::Dense ? c.c_lo.sign() > 0
                                                 : mu.measure_lb(c.a, c.b, bp.tol_c).sign() > 0;
      if (charged) throw DomainError("integrand is negative on part of the carrier");
    }
    const Rational u = c.upper_max();
    if (!any || top < u) top = u;
    any = true;
  }
  if (!any || top.sign() < 0) top = 0;

  const Rational mass_scale = res.mass_hi + Rational(1);
  const Rational delta = eps / (Rational(16) * mass_scale);
  res.r_n = round_up(top + delta / Rational(2), bits_for(delta / Rational(4)));
  // n a power of two with 2 r_1 mu(X) <= eps / 4
  Integer n(1);
  if (res.mass_hi.sign() > 0) {
    const Rational ratio = Rational(8) * res.r_n * res.mass_hi / eps;
    n = pow2(bits_for(Rational(1) / ratio)).numerator();
  }
  const Rational r1 = res.r_n / Rational(n);
  const long bits = bits_for(eps / Rational(256 * static_cast<long>(cells.size() + 1)));

  Rational lower, below;
  for (const Cell& c : cells) {
    if (c.kind != Kind::Dense || c.c_lo.sign() <= 0) continue;
    Rational up = r1 * c.sum_above(r1, n);
    Rational down = r1 * c.sum_below(r1, n);
    if (c.quad && c.v.lo().sign() >= 0) {
      // For 0 <= f < r_n the level counts satisfy r1 #{i : r_i < f} >= f - r1
      // and r1 #{k : r_k > f} >= r_n - f - r1, so the sums over the cell are
      // bounded through the integral of f.
      up = max(up, c.quad->lo() - r1 * c.h);
      down = max(down, (res.r_n - r1) * c.h - c.quad->hi());
    }
    lower += round_down(c.c_lo * up, bits);
    below += round_down(c.c_lo * down, bits);
  }

  // Generic cells: sweep the distinct thresholds.
  const auto& gen = runs.indices();
  if (!gen.empty()) {
    std::vector<std::pair<Rational, std::size_t>> up, down;
    for (std::size_t i : gen) {
      up.emplace_back(cells[i].lower_min(), i);
      down.emplace_back(cells[i].upper_max(), i);
    }
    // superlevel: cell i counts for levels r < lower_min(i)
    std::sort(up.begin(), up.end(), [](const auto& p, const auto& q) { return q.first < p.first; });
    std::vector<bool> active(cells.size(), false);
    Rational gen_lower;
    for (std::size_t g = 0; g < up.size();) {
      const Rational t = up[g].first;
      while (g < up.size() && up[g].first == t) active[up[g++].second] = true;
      const Integer upper_count = count_below(t, r1, 1, n);
      const Integer lower_count = g < up.size() ? count_below(up[g].first, r1, 1, n) : Integer(0);
      const Integer levels = upper_count - lower_count;
      if (levels > 0) gen_lower += r1 * Rational(levels) * runs.measure(active);
    }
    lower += round_down(gen_lower, bits);

    // sublevel: cell i counts for levels r > upper_max(i)
    std::sort(down.begin(), down.end(), [](const auto& p, const auto& q) { return p.first < q.first; });
    std::fill(active.begin(), active.end(), false);
    Rational gen_below;
    const Integer last = n - 1;
    for (std::size_t g = 0; g < down.size();) {
      const Rational t = down[g].first;
      while (g < down.size() && down[g].first == t) active[down[g++].second] = true;
      const Integer from = count_at_most(t, r1, 0, last);
      const Integer to = g < down.size() ? count_at_most(down[g].first, r1, 0, last) : n;
      const Integer levels = to - from;
      if (levels > 0) gen_below += r1 * Rational(levels) * runs.measure(active);
    }
    below += round_down(gen_below, bits);
  }

  res.lo = lower;
  res.hi = res.r_n * res.mass_hi - below;
  if (res.hi < res.lo) res.hi = res.lo;  // cannot happen for sound inputs; keeps the interval valid
  if (opts.record_trace) {
    res.trace = make_trace(cells, runs, res.r_n, n, res.mass_hi, bits, opts.trace_levels);
  }
  return res;
}

Rational lower_bound_one(const Rational& q) { return max(q, Rational(1)); }

}  // namespace

Enclosure integrate(const RealFunc& f, const Valuation& mu, const Rational& eps,
                    const IntegrationOptions& opts) {
  if (eps.sign() <= 0) throw std::invalid_argument("integrate: tolerance must be positive");
  Enclosure best;
  bool have = false;
  Rational top_hint(1);
  Rational mass_hint(1);
  for (int round = 0; round <= opts.max_rounds; ++round) {
    const Rational scale = pow2(-2 * round);
    BuildParams bp;
    bp.opts = &opts;
    bp.tol_c = eps * scale / (Rational(64) * lower_bound_one(top_hint));
    bp.tol_f = eps * scale / (Rational(32) * lower_bound_one(mass_hint));
    bp.target = to_d(eps * scale) * 3 / 8;
    const Box box = bounding_box(mu, bp.tol_c);
    if (box.empty) {
      Enclosure e{Rational(0), Rational(0), false, std::nullopt, std::nullopt};
      if (opts.record_trace) {
        Trace t;
        t.levels = {Rational(0), Rational(1)};
        t.superlevel_bounds = {Rational(0)};
        t.sublevel_bounds = {Rational(0)};
        e.trace = t;
      }
      return e;
    }
    RoundResult r = integrate_round(f, mu, eps, bp, box.box);
    top_hint = r.r_n;
    mass_hint = r.mass_hi;
    if (!have) {
      best = Enclosure{r.lo, r.hi, false, std::move(r.trace), std::nullopt};
      have = true;
    } else {
      const Rational lo = max(best.lo, r.lo);
      const Rational hi = min(best.hi, r.hi);
      if (lo <= hi) {
        best.lo = lo;
        best.hi = hi;
      }
      if (r.trace) best.trace = std::move(r.trace);
    }
    if (best.width() <= eps) return best;
    if (r.exhausted) break;
  }
  best.exhausted = true;
  return best;
}

Enclosure integrate_signed(const RealFunc& f, const Valuation& mu, const Rational& eps,
                           const IntegrationOptions& opts) {
  // Skip the split when the sign of f on the carrier is already known.
  try {
    const Rational tol = eps * pow2(-8);
    const RatInterval box(mu.carrier_lo().approx(tol).lo(),
                          max(mu.carrier_lo().approx(tol).lo(), mu.carrier_hi().approx(tol).hi()));
    const RatInterval range = f.range(box, tol);
    if (range.lo().sign() >= 0) return integrate(f, mu, eps, opts);
    if (range.hi().sign() <= 0) {
      Enclosure neg = integrate(-f, mu, eps, opts);
      Enclosure out{-neg.hi, -neg.lo, neg.exhausted, std::nullopt, std::nullopt};
      if (neg.hi.sign() > 0) out.negative_trace = std::move(neg.trace);
      return out;
    }
  } catch (const Error&) {
  }
  const Rational half = eps / Rational(2);
  const RealFunc zero = RealFunc::constant(Rational(0));
  const Enclosure pos = integrate(max(zero, f), mu, half, opts);
  const Enclosure neg = integrate(max(zero, -f), mu, half, opts);
  Enclosure out{pos.lo - neg.hi, pos.hi - neg.lo, pos.exhausted || neg.exhausted, pos.trace,
                std::nullopt};
  if (neg.hi.sign() > 0) out.negative_trace = neg.trace;
  return out;
}

Enclosure integrate_oriented(const RealFunc& f, const Real& x, const Real& y, const Rational& eps,
                             const IntegrationOptions& opts) {
  const bool exact = x.exact() && y.exact();
  const Rational half = exact ? eps : eps / Rational(2);
  const Real lo = min(x, y);
  const Real hi = max(x, y);
  Enclosure s = integrate_signed(f, lebesgue(lo, hi, Rational(0)), half, opts);
  auto negated = [](Enclosure e) {
    Rational lo2 = -e.hi;
    e.hi = -e.lo;
    e.lo = std::move(lo2);
    return e;
  };
  if (exact) return *y.exact() < *x.exact() ? negated(std::move(s)) : s;
  Rational tol = eps / Rational(4);
  for (int i = 0; i < 24; ++i, tol /= Rational(16)) {
    const Apartness ap = compare(x, y, tol);
    if (ap.order == Order::Less) return s;
    if (ap.order == Order::Greater) return negated(std::move(s));
    const Rational m = max(s.lo.abs(), s.hi.abs());
    if (Rational(2) * m <= eps) {
      s.lo = -m;
      s.hi = m;
      return s;
    }
  }
  const Rational m = max(s.lo.abs(), s.hi.abs());
  s.lo = -m;
  s.hi = m;
  s.exhausted = true;
  return s;
}

SupBound sup_bound(const RealFunc& f, const Real& x, const Real& y, const Rational& eps,
                   const IntegrationOptions& opts) {
  if (eps.sign() <= 0) throw std::invalid_argument("sup_bound: tolerance must be positive");
  const Rational tol = eps * pow2(-12);
  const RatInterval xs = x.approx(tol);
  const RatInterval ys = y.approx(tol);
  const Rational lo = xs.lo();
  const Rational hi = max(lo, ys.hi());

  // Certified values of f at points of [x, y].
  Rational witness = f(x).approx(eps / Rational(4)).lo();
  witness = max(witness, f(y).approx(eps / Rational(4)).lo());

  struct Node {
    Rational a, b;
    std::optional<RatInterval> v;
    int depth;
  };
  auto value_key = [](const Node& n) { return n.v ? to_d(n.v->hi()) : kInf; };
  auto cmp = [&](const Node& p, const Node& q) { return value_key(p) < value_key(q); };
  std::priority_queue<Node, std::vector<Node>, decltype(cmp)> queue(cmp);

  auto make = [&](Rational a, Rational b, int depth) {
    Node n{std::move(a), std::move(b), std::nullopt, depth};
    try {
      n.v = f.range(RatInterval(n.a, n.b), tol);
      if (xs.hi() <= n.a && n.a <= ys.lo()) {
        witness = max(witness, f.range(RatInterval(n.a), tol).lo());
      }
    } catch (const BudgetExhausted&) {
      throw;
    } catch (const Error&) {
      n.v.reset();
    }
    queue.push(std::move(n));
  };

  make(lo, hi, 0);
  std::size_t count = 1;
  SupBound out;
  while (true) {
    Node top = queue.top();
    if (top.v) {
      // Everything else in the queue is at most top.v->hi().
      Rational bound = top.v->hi();
      if (bound - witness <= eps || top.a == top.b) {
        out.bound = bound;
        out.slack = max(Rational(0), bound - witness);
        out.exhausted = bound - witness > eps;
        return out;
      }
    }
    if (top.depth >= opts.max_depth || count + 1 > opts.max_cells) {
      if (!top.v) throw DomainError("sup_bound: integrand undefined near " + top.a.str());
      out.bound = top.v->hi();
      out.slack = max(Rational(0), out.bound - witness);
      out.exhausted = true;
      return out;
    }
    queue.pop();
    const Rational m = (top.a + top.b) / Rational(2);
    make(top.a, m, top.depth + 1);
    make(m, top.b, top.depth + 1);
    ++count;
  }
}

namespace {

enum class Side { Above, Below };

LevelBound level_bound(const RealFunc& f, const Valuation& mu, const Rational& r,
                       const Rational& eps, const IntegrationOptions& opts, Side side) {
  if (eps.sign() <= 0) throw std::invalid_argument("level bound: tolerance must be positive");
  BuildParams bp;
  bp.opts = &opts;
  bp.tol_c = eps / Rational(64);
  bp.tol_f = eps / Rational(64);
  bp.target = to_d(eps) / 2;
  const Box box = bounding_box(mu, bp.tol_c);
  if (box.empty) return {Rational(0), false};
  CellSet set = build_cells(f, mu, box.box, bp, [&r](const Cell& c) { return level_error(c, r); });
  GenericRuns runs(set.cells, mu, bp.tol_c);
  const long bits = bits_for(eps / Rational(256 * static_cast<long>(set.cells.size() + 1)));
  Rational total;
  for (const Cell& c : set.cells) {
    if (c.kind != Kind::Dense || c.c_lo.sign() <= 0) continue;
    const Rational len = side == Side::Above ? c.len_above(r) : c.len_below(r);
    total += round_down(c.c_lo * len, bits);
  }
  std::vector<bool> active(set.cells.size(), false);
  for (std::size_t i : runs.indices()) {
    const Cell& c = set.cells[i];
    active[i] = side == Side::Above ? c.lower_min() > r : c.upper_max() < r;
  }
  total += runs.measure(active);
  return {total, set.exhausted};
}

}  // namespace

LevelBound superlevel_lb(const RealFunc& f, const Valuation& mu, const Rational& r,
                         const Rational& eps, const IntegrationOptions& opts) {
  return level_bound(f, mu, r, eps, opts, Side::Above);
}

LevelBound sublevel_lb(const RealFunc& f, const Valuation& mu, const Rational& r,
                       const Rational& eps, const IntegrationOptions& opts) {
  return level_bound(f, mu, r, eps, opts, Side::Below);
}

SumBound lower_sum(const RealFunc& f, const Valuation& mu, const Partition& p,
                   const Rational& eps, const IntegrationOptions& opts) {
  const Rational each = eps / lower_bound_one(p.top());
  SumBound out{Rational(0), false};
  const auto& r = p.levels();
  for (std::size_t i = 1; i < r.size(); ++i) {
    const LevelBound m = superlevel_lb(f, mu, r[i], each, opts);
    out.value += (r[i] - r[i - 1]) * m.bound;
    out.exhausted = out.exhausted || m.exhausted;
  }
  return out;
}

SumBound upper_sum(const RealFunc& f, const Valuation& mu, const Partition& p,
                   const Rational& eps, const IntegrationOptions& opts) {
  // The top level has to clear f on the carrier.
  bool cleared = false;
  for (long k = 8; k <= 40 && !cleared; k += 8) {
    const SupBound sb = sup_bound(f, mu.carrier_lo(), mu.carrier_hi(), pow2(-k), opts);
    if (sb.bound < p.top()) cleared = true;
    else if (p.top() <= sb.bound - sb.slack) break;
  }
  if (!cleared) {
    throw LevelsTooLow("top level " + p.top().str() + " does not clear the integrand");
  }
  const Rational each = eps / (Rational(2) * lower_bound_one(p.top()));
  const Rational mass_hi = mu.total_mass().approx(each).hi();
  SumBound out{Rational(0), false};
  const auto& r = p.levels();
  for (std::size_t i = 1; i < r.size(); ++i) {
    const LevelBound m = sublevel_lb(f, mu, r[i - 1], each, opts);
    out.value += (r[i] - r[i - 1]) * (mass_hi - m.bound);
    out.exhausted = out.exhausted || m.exhausted;
  }
  return out;
}

RatInterval darboux_oracle(const RealFunc& f, const Rational& x, const Rational& y, std::size_t n) {
  if (y < x) throw std::invalid_argument("darboux_oracle: need x <= y");
  if (n == 0) throw std::invalid_argument("darboux_oracle: need n >= 1");
  const Rational step = (y - x) / Rational(static_cast<long>(n));
  Rational lo, hi;
  for (std::size_t i = 0; i < n; ++i) {
    const Rational a = x + step * Rational(static_cast<long>(i));
    const RatInterval v = f.range(RatInterval(a, a + step));
    lo += v.lo() * step;
    hi += v.hi() * step;
  }
  return {lo, hi};
}

}  // namespace dedekind
