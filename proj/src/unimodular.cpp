#include "duomagma/unimodular.hpp"

#include "duomagma/error.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace duomagma {

// --- budgets ------------------------------------------------------------------

Integer SearchBudget::pigeonhole_bound(std::size_t l, std::size_t n, const Integer& m) {
  Integer base = Integer(2 * l) * m;
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), n);
  return out + 1;
}

Integer SearchBudget::entry_bound(const std::vector<std::vector<Rational>>& columns, const Rational& eps) {
  if (eps <= 0) throw Error(ErrorCode::SchemaError, "entry bound needs eps > 0");
  Rational largest = 0;
  for (const auto& c : columns)
    for (const auto& v : c) largest = std::max(largest, abs(v));
  Rational ratio = largest / eps;
  Integer m = -floor(-ratio);  // ceiling
  return m < 1 ? Integer(1) : m;
}

SearchBudget SearchBudget::pigeonhole(const std::vector<std::vector<Rational>>& columns, const Rational& eps,
                                      SearchStrategy strategy) {
  SearchBudget b;
  b.strategy = strategy;
  b.max_abs_entry = entry_bound(columns, eps);
  b.pigeonhole_k = pigeonhole_bound(columns.size(), columns.empty() ? 0 : columns[0].size(), b.max_abs_entry);
  return b;
}

// --- integer helpers ------------------------------------------------------------

std::tuple<Integer, Integer, Integer> extended_gcd(const Integer& a, const Integer& b) {
  Integer old_r = ::abs(a), r = ::abs(b);
  Integer old_s = 1, s = 0;
  Integer old_t = 0, t = 1;
  while (r != 0) {
    Integer q = old_r / r;
    Integer tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (a < 0) old_s = -old_s;
  if (b < 0) old_t = -old_t;
  return {old_r, old_s, old_t};
}

Integer gcd_of(const std::vector<Integer>& v) {
  Integer g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  return g;
}

UnimodularMatrix primitive_completion(const std::vector<Integer>& d) {
  const std::size_t l = d.size();
  if (l == 0 || gcd_of(d) != 1) throw Error(ErrorCode::NotPrimitive, "vector is not primitive");
  if (l == 1) {
    if (d[0] != 1) throw Error(ErrorCode::NotPrimitive, "SL(1,Z) only contains (1)");
    return UnimodularMatrix::identity(1);
  }
  const std::size_t last = l - 1;
  IntMatrix m = IntMatrix::identity(l);
  std::vector<Integer> v = d;
  for (std::size_t i = 0; i < last; ++i) {
    if (v[i] == 0) continue;
    auto [g, x, y] = extended_gcd(v[i], v[last]);
    Integer a = v[i] / g;
    Integer b = v[last] / g;
    // The row operation [[b, -a], [x, y]] sends (v_i, v_last) to (0, g); m
    // accumulates its inverse [[y, a], [-x, b]] on the right.
    for (std::size_t r = 0; r < l; ++r) {
      Integer ci = m(r, i);
      Integer cl = m(r, last);
      m(r, i) = y * ci - x * cl;
      m(r, last) = a * ci + b * cl;
    }
    v[i] = 0;
    v[last] = g;
  }
  if (v[last] == -1) {
    for (std::size_t r = 0; r < l; ++r) {
      m(r, 0) = -m(r, 0);
      m(r, last) = -m(r, last);
    }
  }
  UnimodularMatrix out(std::move(m));
  for (std::size_t r = 0; r < l; ++r) {
    if (out(r, last) != d[r]) throw std::logic_error("completion lost the last column");
  }
  return out;
}

// --- LLL ------------------------------------------------------------------------

namespace {

Integer round_nearest(const Rational& r) { return floor(r + Rational(1, 2)); }

struct GramSchmidt {
  std::vector<std::vector<Rational>> star;
  std::vector<Rational> norm;
  std::vector<std::vector<Rational>> mu;
};

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

GramSchmidt gram_schmidt(const std::vector<std::vector<Integer>>& b) {
  const std::size_t k = b.size();
  GramSchmidt gs;
  gs.star.resize(k);
  gs.norm.resize(k);
  gs.mu.assign(k, std::vector<Rational>(k, Rational(0)));
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<Rational> bi(b[i].begin(), b[i].end());
    gs.star[i] = bi;
    for (std::size_t j = 0; j < i; ++j) {
      gs.mu[i][j] = dot(bi, gs.star[j]) / gs.norm[j];
      for (std::size_t c = 0; c < bi.size(); ++c) gs.star[i][c] -= gs.mu[i][j] * gs.star[j][c];
    }
    gs.norm[i] = dot(gs.star[i], gs.star[i]);
    if (gs.norm[i] == 0) throw Error(ErrorCode::ShapeMismatch, "LLL basis rows are linearly dependent");
  }
  return gs;
}

}  // namespace

IntMatrix lll_reduce(const IntMatrix& basis, const Rational& delta) {
  std::vector<std::vector<Integer>> b;
  for (std::size_t i = 0; i < basis.rows(); ++i) b.push_back(basis.row(i));
  const std::size_t rows = b.size();
  if (rows > 1) {
    GramSchmidt gs = gram_schmidt(b);
    std::size_t k = 1;
    while (k < rows) {
      for (std::size_t jj = k; jj-- > 0;) {
        Integer q = round_nearest(gs.mu[k][jj]);
        if (q == 0) continue;
        for (std::size_t c = 0; c < b[k].size(); ++c) b[k][c] -= q * b[jj][c];
        gs = gram_schmidt(b);
      }
      const Rational& m = gs.mu[k][k - 1];
      if (gs.norm[k] >= (delta - m * m) * gs.norm[k - 1]) {
        ++k;
      } else {
        std::swap(b[k], b[k - 1]);
        gs = gram_schmidt(b);
        k = std::max<std::size_t>(k - 1, 1);
      }
    }
  }
  IntMatrix out(rows, basis.cols());
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t c = 0; c < basis.cols(); ++c) out(i, c) = b[i][c];
  return out;
}

// --- small combinations ---------------------------------------------------------------

bool combination_is_small(const std::vector<std::vector<Rational>>& columns,
                          const std::vector<Integer>& d, const Rational& eps) {
  if (columns.empty() || d.size() != columns.size()) return false;
  const std::size_t n = columns[0].size();
  for (std::size_t r = 0; r < n; ++r) {
    Rational s = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d[i] != 0) s += Rational(d[i]) * columns[i][r];
    }
    if (abs(s) > eps) return false;
  }
  return true;
}

namespace {

/// Visits integer vectors of length l in order of increasing max-norm, each
/// shell in lexicographic order, keeping only vectors whose first nonzero
/// entry is positive. Stops when `visit` returns true; returns false when the
/// radius or step limit is reached first.
bool scan_by_norm(std::size_t l, const Integer& max_radius, std::uint64_t max_steps,
                  const std::function<bool(const std::vector<Integer>&)>& visit) {
  std::uint64_t steps = 0;
  for (long r = 1;; ++r) {
    if (max_radius > 0 && Integer(r) > max_radius) return false;
    std::vector<long> c(l, -r);
    while (true) {
      if (++steps > max_steps) return false;
      long top = 0;
      long first = 0;
      for (long x : c) {
        top = std::max(top, std::labs(x));
        if (first == 0) first = x;
      }
      if (top == r && first > 0) {
        std::vector<Integer> v(c.begin(), c.end());
        if (visit(v)) return true;
      }
      std::size_t i = l;
      while (i > 0 && c[i - 1] == r) c[--i] = -r;
      if (i == 0) break;
      ++c[i - 1];
    }
  }
}

void make_primitive(std::vector<Integer>& d) {
  Integer g = gcd_of(d);
  if (g > 1) {
    for (auto& x : d) x /= g;
  }
  auto first = std::find_if(d.begin(), d.end(), [](const Integer& x) { return x != 0; });
  if (first != d.end() && *first < 0) {
    for (auto& x : d) x = -x;
  }
}

}  // namespace

std::vector<Integer> small_combination(const std::vector<std::vector<Rational>>& columns,
                                       const Rational& eps, const SearchBudget& budget) {
  const std::size_t l = columns.size();
  if (l == 0) throw Error(ErrorCode::ShapeMismatch, "no columns to combine");
  const std::size_t n = columns[0].size();
  for (const auto& c : columns) {
    if (c.size() != n) throw Error(ErrorCode::ShapeMismatch, "columns differ in length");
  }
  if (eps < 0) throw Error(ErrorCode::SchemaError, "eps must be nonnegative");

  std::vector<Integer> found;
  if (budget.strategy == SearchStrategy::Enumeration) {
    Integer radius = budget.pigeonhole_k > 0 ? Integer(2 * budget.pigeonhole_k) : Integer(0);
    scan_by_norm(l, radius, budget.timeout_steps, [&](const std::vector<Integer>& d) {
      if (gcd_of(d) != 1 || !combination_is_small(columns, d, eps)) return false;
      found = d;
      return true;
    });
  } else {
    std::vector<Rational> all;
    for (const auto& c : columns) all.insert(all.end(), c.begin(), c.end());
    const Integer scale = lcm_of_denominators(all);
    IntMatrix basis(l, n + l);
    for (std::size_t i = 0; i < l; ++i) {
      for (std::size_t r = 0; r < n; ++r) basis(i, r) = Rational(Rational(scale) * columns[i][r]).get_num();
      basis(i, n + i) = 1;
    }
    IntMatrix reduced = lll_reduce(basis);
    scan_by_norm(l, Integer(0), budget.timeout_steps, [&](const std::vector<Integer>& c) {
      std::vector<Integer> d(l, Integer(0));
      for (std::size_t j = 0; j < l; ++j) {
        if (c[j] == 0) continue;
        for (std::size_t i = 0; i < l; ++i) d[i] += c[j] * reduced(j, n + i);
      }
      make_primitive(d);
      if (!combination_is_small(columns, d, eps)) return false;
      found = d;
      return true;
    });
  }
  if (found.empty()) throw Error(ErrorCode::BudgetExhausted, "no small combination within the search budget");
  if (gcd_of(found) != 1 || !combination_is_small(columns, found, eps)) {
    throw std::logic_error("small combination failed its post-check");
  }
  return found;
}

// --- shrinking ----------------------------------------------------------------------

std::size_t count_small_columns(const RationalMatrix& x, const Rational& eps) {
  std::size_t k = 0;
  for (std::size_t c = 0; c < x.cols(); ++c) {
    bool small = true;
    for (std::size_t r = 0; r < x.rows() && small; ++r) small = abs(x(r, c)) <= eps;
    if (small) ++k;
  }
  return k;
}

namespace {

bool column_is_small(const RationalMatrix& x, std::size_t c, const Rational& eps) {
  for (std::size_t r = 0; r < x.rows(); ++r)
    if (abs(x(r, c)) > eps) return false;
  return true;
}

/// Signed permutation (det +1) moving the small columns of `x` to the front,
/// keeping relative order. An odd permutation is corrected by negating the
/// last column, which keeps small columns small.
IntMatrix front_small_columns(const RationalMatrix& x, const Rational& eps) {
  const std::size_t m = x.cols();
  std::vector<std::size_t> order;
  for (std::size_t c = 0; c < m; ++c)
    if (column_is_small(x, c, eps)) order.push_back(c);
  for (std::size_t c = 0; c < m; ++c)
    if (!column_is_small(x, c, eps)) order.push_back(c);
  IntMatrix p(m, m);
  for (std::size_t j = 0; j < m; ++j) p(order[j], j) = 1;
  std::vector<bool> seen(m, false);
  std::size_t transpositions = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = order[j]) {
      seen[j] = true;
      ++len;
    }
    transpositions += len - 1;
  }
  if (transpositions % 2 == 1) p(order[m - 1], m - 1) = -1;
  return p;
}

}  // namespace

UnimodularMatrix shrink_columns(const RationalMatrix& x, const Rational& eps, const SearchBudget& budget) {
  const std::size_t n = x.rows();
  const std::size_t m = x.cols();
  if (n == 0 || m != 2 * n) throw Error(ErrorCode::ShapeMismatch, "matrix must have shape n x 2n");
  if (eps < 0) throw Error(ErrorCode::SchemaError, "eps must be nonnegative");

  IntMatrix a = IntMatrix::identity(m);
  std::size_t previous = 0;
  bool first = true;
  while (true) {
    RationalMatrix xa = multiply(x, a);
    const std::size_t k = count_small_columns(xa, eps);
    if (!first && k <= previous) throw std::logic_error("small-column count did not increase");
    first = false;
    previous = k;

    a = multiply(a, front_small_columns(xa, eps));
    if (k >= n) break;
    xa = multiply(x, a);

    const std::size_t l = m - k;
    std::vector<std::vector<Rational>> tail(l);
    for (std::size_t i = 0; i < l; ++i) tail[i] = xa.col(k + i);
    std::vector<Integer> d = small_combination(tail, eps, budget);
    UnimodularMatrix completion = primitive_completion(d);
    IntMatrix block = IntMatrix::identity(m);
    for (std::size_t r = 0; r < l; ++r)
      for (std::size_t c = 0; c < l; ++c) block(k + r, k + c) = completion(r, c);
    a = multiply(a, block);
  }
  UnimodularMatrix out(std::move(a));
  RationalMatrix xa = multiply(x, out.matrix());
  for (std::size_t c = 0; c < n; ++c) {
    if (!column_is_small(xa, c, eps)) throw std::logic_error("shrink_columns post-check failed");
  }
  return out;
}

// --- torus absorption -------------------------------------------------------------------

namespace {

Rational centered(const Rational& v) {
  Rational f = frac(v);
  return f >= Rational(1, 2) ? Rational(f - 1) : f;
}

bool points_in_box(const std::vector<std::vector<Rational>>& points, const UnimodularMatrix& a,
                   const std::vector<std::size_t>& coords, const Rational& eps) {
  for (const auto& p : points) {
    std::vector<Rational> img = a.act(p, true);
    if (coords.empty()) {
      for (const auto& v : img)
        if (dist_to_integer(v) > eps) return false;
    } else {
      for (std::size_t c : coords)
        if (dist_to_integer(img.at(c)) > eps) return false;
    }
  }
  return true;
}

}  // namespace

UnimodularMatrix torus_absorb(const std::vector<std::vector<Rational>>& points, std::size_t m,
                              const std::vector<std::size_t>& coords, const Rational& eps,
                              const SearchBudget& budget) {
  for (const auto& p : points) {
    if (p.size() != m) throw Error(ErrorCode::ShapeMismatch, "point dimension does not match the torus");
  }
  for (std::size_t c : coords) {
    if (c >= m) throw Error(ErrorCode::ShapeMismatch, "box coordinate out of range");
  }
  const std::size_t box_size = coords.empty() ? m : coords.size();
  const std::size_t n = std::max(points.size(), box_size);
  if (points.empty()) return UnimodularMatrix::identity(m);
  if (m < 2 * n) {
    throw Error(ErrorCode::DimensionTooSmall, "torus dimension must be at least 2 * max(|F|, |D|)");
  }

  // Box coordinates lead, then the others; only the first 2n take part.
  std::vector<std::size_t> active;
  if (coords.empty()) {
    for (std::size_t c = 0; c < m; ++c) active.push_back(c);
  } else {
    active = coords;
    std::sort(active.begin(), active.end());
    for (std::size_t c = 0; c < m; ++c)
      if (!std::binary_search(coords.begin(), coords.end(), c) &&
          std::find(active.begin(), active.end(), c) == active.end())
        active.push_back(c);
  }
  active.resize(2 * n);

  RationalMatrix x(n, 2 * n);
  for (std::size_t r = 0; r < points.size(); ++r)
    for (std::size_t j = 0; j < 2 * n; ++j) x(r, j) = centered(points[r][active[j]]);

  UnimodularMatrix inner = shrink_columns(x, eps, budget);
  IntMatrix a = IntMatrix::identity(m);
  for (std::size_t i = 0; i < 2 * n; ++i)
    for (std::size_t j = 0; j < 2 * n; ++j) a(active[i], active[j]) = inner(i, j);
  UnimodularMatrix out(std::move(a));

  std::vector<std::size_t> checked = coords;
  if (checked.empty()) {
    for (std::size_t c = 0; c < m; ++c) checked.push_back(c);
  }
  if (!points_in_box(points, out, checked, eps)) throw std::logic_error("torus_absorb post-check failed");
  return out;
}

std::optional<UnimodularMatrix> enumerate_sl2_absorb(const std::vector<std::vector<Rational>>& points,
                                                     const std::vector<std::size_t>& coords,
                                                     const Rational& eps, int bound) {
  UnimodularMatrix id = UnimodularMatrix::identity(2);
  if (points_in_box(points, id, coords, eps)) return id;
  for (long r = 1; r <= bound; ++r) {
    for (long a = -r; a <= r; ++a)
      for (long b = -r; b <= r; ++b)
        for (long c = -r; c <= r; ++c)
          for (long d = -r; d <= r; ++d) {
            if (std::max({std::labs(a), std::labs(b), std::labs(c), std::labs(d)}) != r) continue;
            if (a * d - b * c != 1) continue;
            UnimodularMatrix cand(IntMatrix{{Integer(a), Integer(b)}, {Integer(c), Integer(d)}});
            if (points_in_box(points, cand, coords, eps)) return cand;
          }
  }
  return std::nullopt;
}

UnimodularMatrix block_diagonal_lift(const UnimodularMatrix& a, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::ShapeMismatch, "need at least one block");
  const std::size_t d = a.size();
  IntMatrix out(d * k, d * k);
  for (std::size_t blk = 0; blk < k; ++blk)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) out(blk * d + i, blk * d + j) = a(i, j);
  return UnimodularMatrix(std::move(out));
}

// --- registry ----------------------------------------------------------------------

AbsorbingFamilyRegistry::AbsorbingFamilyRegistry(std::string id, std::size_t dimension,
                                                 std::vector<UnimodularMatrix> seeds)
    : id_(std::move(id)), dimension_(dimension) {
  for (auto& s : seeds) {
    if (s.size() != dimension_) throw Error(ErrorCode::ShapeMismatch, "seed dimension does not match");
    entries_.push_back({"", std::move(s)});
  }
}

std::vector<AbsorbingFamilyRegistry::Entry> AbsorbingFamilyRegistry::entries() const {
  std::shared_lock lock(mutex_);
  return entries_;
}

void AbsorbingFamilyRegistry::restore(Entry entry) {
  if (entry.shrink.size() != dimension_) throw Error(ErrorCode::ShapeMismatch, "entry dimension does not match");
  std::unique_lock lock(mutex_);
  if (!entry.key.empty() && by_key_.count(entry.key)) return;
  if (!entry.key.empty()) by_key_[entry.key] = entries_.size();
  entries_.push_back(std::move(entry));
}

std::string AbsorbingFamilyRegistry::fingerprint(std::vector<std::vector<Rational>> points,
                                                 const Neighborhood& u) {
  std::vector<std::string> rendered;
  for (auto& p : points) {
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i) s += ',';
      s += format_rational(frac(p[i]));
    }
    rendered.push_back(std::move(s));
  }
  std::sort(rendered.begin(), rendered.end());
  rendered.erase(std::unique(rendered.begin(), rendered.end()), rendered.end());
  std::string key = "points=";
  for (std::size_t i = 0; i < rendered.size(); ++i) {
    if (i) key += ';';
    key += "(" + rendered[i] + ")";
  }
  if (u.kind() == Neighborhood::Kind::EpsBox) {
    key += "|eps-box=" + format_rational(u.eps_box().eps) + "@";
    for (std::size_t i = 0; i < u.eps_box().coords.size(); ++i) {
      if (i) key += ',';
      key += std::to_string(u.eps_box().coords[i]);
    }
  } else {
    key += "|whole";
  }
  return key;
}

AbsorbingFamilyRegistry::Result AbsorbingFamilyRegistry::absorb(
    const std::vector<std::vector<Rational>>& points, const Neighborhood& u, const SearchBudget& budget) {
  for (const auto& p : points) {
    if (p.size() != dimension_) throw Error(ErrorCode::ShapeMismatch, "point dimension does not match");
  }
  if (u.kind() == Neighborhood::Kind::Whole) return {UnimodularMatrix::identity(dimension_), false};
  if (u.kind() != Neighborhood::Kind::EpsBox) {
    throw Error(ErrorCode::ShapeMismatch, "torus absorption needs an eps-box neighbourhood");
  }
  const auto& box = u.eps_box();
  const std::string key = fingerprint(points, u);

  std::vector<Entry> snapshot;
  {
    std::shared_lock lock(mutex_);
    if (auto it = by_key_.find(key); it != by_key_.end()) {
      ++memo_hits_;
      return {entries_[it->second].shrink, true};
    }
    snapshot = entries_;
  }

  std::optional<UnimodularMatrix> found;
  UnimodularMatrix id = UnimodularMatrix::identity(dimension_);
  if (points_in_box(points, id, box.coords, box.eps)) found = id;
  for (std::size_t i = 0; !found && i < snapshot.size(); ++i) {
    if (points_in_box(points, snapshot[i].shrink, box.coords, box.eps)) found = snapshot[i].shrink;
  }
  if (!found) {
    try {
      found = torus_absorb(points, dimension_, box.coords, box.eps, budget);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DimensionTooSmall || dimension_ != 2) throw;
      found = enumerate_sl2_absorb(points, box.coords, box.eps, 12);
      if (!found) throw Error(ErrorCode::AbsorptionFailed, "no SL(2,Z) matrix with entries <= 12 absorbs the points");
    }
  }
  if (!points_in_box(points, *found, box.coords, box.eps)) {
    throw std::logic_error("registry absorption post-check failed");
  }

  std::unique_lock lock(mutex_);
  if (auto it = by_key_.find(key); it != by_key_.end()) {
    return {entries_[it->second].shrink, true};
  }
  auto same = std::find_if(entries_.begin(), entries_.end(),
                           [&](const Entry& e) { return e.shrink == *found; });
  if (same != entries_.end()) {
    by_key_[key] = static_cast<std::size_t>(same - entries_.begin());
  } else {
    by_key_[key] = entries_.size();
    entries_.push_back({key, *found});
  }
  return {*found, false};
}

Automorphism registry_absorb(AbsorbingFamilyRegistry& registry,
                             const std::vector<std::vector<Rational>>& points, const Neighborhood& u) {
  return Automorphism::matrix(registry.absorb(points, u).shrink.inverse());
}

MagmaPtr torus_duo_group(std::size_t d, std::vector<UnimodularMatrix> seeds, std::string registry_id) {
  if (d < 2) throw Error(ErrorCode::ShapeMismatch, "torus duo group needs dimension >= 2");
  auto registry = std::make_shared<AbsorbingFamilyRegistry>(std::move(registry_id), d, std::move(seeds));
  return semidirect_aut(rational_torus(d), std::move(registry));
}

}  // namespace duomagma
