#include "gfield/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "gfield/linalg.hpp"
#include "gfield/util.hpp"

namespace gfield::geo {

namespace {
constexpr double kOrthoTol = 1e-12;
constexpr std::size_t kMaxSweepCells = 1u << 20;
constexpr std::size_t kMaxInclExclParts = 16;

void require_finite(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite coordinate");
}
} // namespace

// ---------------------------------------------------------------- Box

double Box::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
  return v;
}

void Box::validate() const {
  if (lo.size() != hi.size() || lo.empty())
    throw std::invalid_argument("Box: dimension mismatch");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    require_finite(lo[i]);
    require_finite(hi[i]);
    if (!(lo[i] <= hi[i])) throw std::invalid_argument("Box: lo > hi");
  }
}

std::optional<Box> Box::intersection(const Box& a, const Box& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("Box: dimension mismatch");
  Box out;
  out.lo.resize(a.dim());
  out.hi.resize(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    out.lo[i] = std::max(a.lo[i], b.lo[i]);
    out.hi[i] = std::min(a.hi[i], b.hi[i]);
    if (!(out.lo[i] < out.hi[i])) return std::nullopt;  // empty or degenerate
  }
  return out;
}

// ---------------------------------------------------------------- Polygon

double Polygon::area() const {
  const std::size_t n = pts.size();
  if (n < 3) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++)
    s += pts[j][0] * pts[i][1] - pts[i][0] * pts[j][1];
  return 0.5 * s;
}

void Polygon::validate() const {
  if (pts.size() < 3) throw std::invalid_argument("Polygon: need >= 3 vertices");
  for (const auto& p : pts) {
    require_finite(p[0]);
    require_finite(p[1]);
  }
  double scale = 0.0;
  for (const auto& p : pts) scale = std::max({scale, std::abs(p[0]), std::abs(p[1])});
  const double tol = -1e-12 * scale * scale;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = pts[i];
    const auto& b = pts[(i + 1) % n];
    const auto& c = pts[(i + 2) % n];
    const double cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
    if (cross < tol)
      throw std::invalid_argument("Polygon: not convex counter-clockwise");
  }
  if (area() <= 0.0) throw std::invalid_argument("Polygon: vertices must wind counter-clockwise");
}

Polygon clip_convex(const Polygon& subject, const Polygon& clip) {
  std::vector<std::array<double, 2>> out = subject.pts;
  const std::size_t m = clip.pts.size();
  for (std::size_t e = 0; e < m && !out.empty(); ++e) {
    const auto& a = clip.pts[e];
    const auto& b = clip.pts[(e + 1) % m];
    const double ex = b[0] - a[0];
    const double ey = b[1] - a[1];
    auto inside = [&](const std::array<double, 2>& p) {
      return ex * (p[1] - a[1]) - ey * (p[0] - a[0]) >= 0.0;
    };
    auto cross_point = [&](const std::array<double, 2>& p, const std::array<double, 2>& q) {
      const double dp = ex * (p[1] - a[1]) - ey * (p[0] - a[0]);
      const double dq = ex * (q[1] - a[1]) - ey * (q[0] - a[0]);
      const double t = dp / (dp - dq);
      return std::array<double, 2>{p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])};
    };
    std::vector<std::array<double, 2>> in;
    in.swap(out);
    const std::size_t n = in.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const bool ci = inside(in[i]);
      const bool cj = inside(in[j]);
      if (ci) {
        if (!cj) out.push_back(cross_point(in[j], in[i]));
        out.push_back(in[i]);
      } else if (cj) {
        out.push_back(cross_point(in[j], in[i]));
      }
    }
  }
  Polygon r;
  r.pts = std::move(out);
  return r;
}

// ---------------------------------------------------------------- Region

Region Region::box(Box b) {
  b.validate();
  Region r;
  r.dim_ = b.dim();
  r.boxes_.push_back(std::move(b));
  return r;
}

Region Region::boxes(std::vector<Box> bs) {
  if (bs.empty()) throw std::invalid_argument("Region: empty box list");
  Region r;
  r.dim_ = bs.front().dim();
  for (auto& b : bs) {
    b.validate();
    if (b.dim() != r.dim_) throw std::invalid_argument("Region: mixed dimensions");
  }
  r.boxes_ = std::move(bs);
  return r;
}

Region Region::polygon(Polygon p) {
  p.validate();
  Region r;
  r.dim_ = 2;
  r.polys_.push_back(std::move(p));
  return r;
}

Region Region::polygons(std::vector<Polygon> ps) {
  if (ps.empty()) throw std::invalid_argument("Region: empty polygon list");
  Region r;
  r.dim_ = 2;
  for (auto& p : ps) p.validate();
  r.polys_ = std::move(ps);
  return r;
}

Region Region::unite(const Region& a, const Region& b) {
  if (a.is_empty()) return b;
  if (b.is_empty()) return a;
  if (a.dim_ != b.dim_) throw std::invalid_argument("Region: mixed dimensions");
  Region r;
  r.dim_ = a.dim_;
  r.boxes_ = a.boxes_;
  r.boxes_.insert(r.boxes_.end(), b.boxes_.begin(), b.boxes_.end());
  r.polys_ = a.polys_;
  r.polys_.insert(r.polys_.end(), b.polys_.begin(), b.polys_.end());
  return r;
}

Region Region::empty(std::size_t dim) {
  Region r;
  r.dim_ = dim;
  return r;
}

const std::vector<Box>& Region::disjoint_box_parts() const {
  if (normalized_valid_) return normalized_;
  normalized_.clear();
  if (!boxes_.empty()) {
    const std::size_t d = dim_;
    // joint coordinate grid per axis
    std::vector<std::vector<double>> coords(d);
    for (const Box& b : boxes_) {
      for (std::size_t i = 0; i < d; ++i) {
        coords[i].push_back(b.lo[i]);
        coords[i].push_back(b.hi[i]);
      }
    }
    std::size_t cells = 1;
    for (auto& c : coords) {
      std::sort(c.begin(), c.end());
      c.erase(std::unique(c.begin(), c.end()), c.end());
      cells *= c.size() > 1 ? c.size() - 1 : 1;
      if (cells > kMaxSweepCells)
        throw std::invalid_argument("Region: coordinate sweep too large");
    }
    // enumerate elementary cells in lexicographic order, keep covered ones
    std::vector<std::size_t> counts(d);
    std::size_t total = 1;
    bool any_degenerate = false;
    for (std::size_t i = 0; i < d; ++i) {
      counts[i] = coords[i].size() > 1 ? coords[i].size() - 1 : 0;
      if (counts[i] == 0) any_degenerate = true;
      total *= std::max<std::size_t>(counts[i], 1);
    }
    if (!any_degenerate) {
      for (std::size_t flat = 0; flat < total; ++flat) {
        Box cell;
        cell.lo.resize(d);
        cell.hi.resize(d);
        std::size_t rem = flat;
        for (std::size_t i = d; i-- > 0;) {
          const std::size_t k = rem % counts[i];
          rem /= counts[i];
          cell.lo[i] = coords[i][k];
          cell.hi[i] = coords[i][k + 1];
        }
        bool covered = false;
        for (const Box& b : boxes_) {
          bool in = true;
          for (std::size_t i = 0; i < d && in; ++i) {
            const double mid = 0.5 * (cell.lo[i] + cell.hi[i]);
            in = mid > b.lo[i] && mid <= b.hi[i];
          }
          if (in) {
            covered = true;
            break;
          }
        }
        if (covered && cell.volume() > 0.0) normalized_.push_back(std::move(cell));
      }
    }
  }
  normalized_valid_ = true;
  return normalized_;
}

std::vector<Polygon> Region::as_polygons() const {
  if (dim_ != 2) throw std::invalid_argument("Region: polygons only in d=2");
  std::vector<Polygon> out = polys_;
  for (const Box& b : disjoint_box_parts()) {
    Polygon p;
    p.pts = {{b.lo[0], b.lo[1]}, {b.hi[0], b.lo[1]}, {b.hi[0], b.hi[1]}, {b.lo[0], b.hi[1]}};
    out.push_back(std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------- measures

namespace {

double sorted_sum(std::vector<double> vals) {
  std::sort(vals.begin(), vals.end());
  return pairwise_sum(vals);
}

// |union of parts| by inclusion-exclusion; intersections of convex parts
// stay convex under iterated clipping
double polygon_union_measure(const std::vector<Polygon>& parts) {
  const std::size_t n = parts.size();
  if (n == 0) return 0.0;
  if (n > kMaxInclExclParts)
    throw std::invalid_argument("Region: too many polygon parts for inclusion-exclusion");
  std::vector<double> terms;
  for (std::size_t mask = 1; mask < (1u << n); ++mask) {
    Polygon cur;
    bool first = true;
    for (std::size_t i = 0; i < n && (first || !cur.pts.empty()); ++i) {
      if (!(mask & (1u << i))) continue;
      if (first) {
        cur = parts[i];
        first = false;
      } else {
        cur = clip_convex(cur, parts[i]);
      }
    }
    const double a = cur.area();
    if (a == 0.0) continue;
    terms.push_back(__builtin_popcount(mask) % 2 == 1 ? a : -a);
  }
  return sorted_sum(std::move(terms));
}

} // namespace

double measure(const Region& r) {
  if (r.is_empty()) return 0.0;
  if (r.has_polygons())
    return polygon_union_measure(r.as_polygons());
  std::vector<double> vols;
  for (const Box& b : r.disjoint_box_parts()) vols.push_back(b.volume());
  return sorted_sum(std::move(vols));
}

Region intersect(const Region& a, const Region& b) {
  if (a.is_empty() || b.is_empty())
    return Region::empty(std::max(a.dim(), b.dim()));
  if (a.dim() != b.dim()) throw std::invalid_argument("intersect: dimension mismatch");
  if (a.has_polygons() || b.has_polygons()) {
    std::vector<Polygon> pa = a.as_polygons();
    std::vector<Polygon> pb = b.as_polygons();
    std::vector<Polygon> parts;
    for (const auto& p : pa)
      for (const auto& q : pb) {
        Polygon c = clip_convex(p, q);
        if (c.pts.size() >= 3 && c.area() > 0.0) parts.push_back(std::move(c));
      }
    if (parts.empty()) return Region::empty(a.dim());
    return Region::polygons(std::move(parts));
  }
  std::vector<Box> parts;
  for (const Box& p : a.disjoint_box_parts())
    for (const Box& q : b.disjoint_box_parts())
      if (auto c = Box::intersection(p, q)) parts.push_back(std::move(*c));
  if (parts.empty()) return Region::empty(a.dim());
  return Region::boxes(std::move(parts));
}

double intersect_measure(const Region& a, const Region& b) {
  const Region c = intersect(a, b);
  if (c.is_empty()) return 0.0;
  if (!c.has_polygons()) {
    // parts inherited from disjoint normalizations are already disjoint
    std::vector<double> vols;
    for (const Box& p : c.box_parts()) vols.push_back(p.volume());
    return sorted_sum(std::move(vols));
  }
  return measure(c);
}

// ---------------------------------------------------------------- transform

namespace {

void check_orthogonal(const std::vector<double>& o, std::size_t d) {
  if (o.size() != d * d) throw std::invalid_argument("transform: matrix size mismatch");
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      double dotv = 0.0;
      for (std::size_t k = 0; k < d; ++k) dotv += o[k * d + i] * o[k * d + j];
      const double want = i == j ? 1.0 : 0.0;
      if (std::abs(dotv - want) > kOrthoTol)
        throw std::invalid_argument("transform: matrix is not orthogonal");
    }
}

// signed permutation: exactly one +-1 per row/column, zeros elsewhere
bool is_signed_permutation(const std::vector<double>& o, std::size_t d,
                           std::vector<int>* axis, std::vector<double>* sign) {
  axis->assign(d, -1);
  sign->assign(d, 1.0);
  for (std::size_t i = 0; i < d; ++i) {
    int found = -1;
    for (std::size_t j = 0; j < d; ++j) {
      const double v = o[i * d + j];
      if (v == 0.0) continue;
      if ((v == 1.0 || v == -1.0) && found < 0) {
        found = static_cast<int>(j);
        (*sign)[i] = v;
      } else {
        return false;
      }
    }
    if (found < 0) return false;
    (*axis)[i] = found;
  }
  return true;
}

} // namespace

Region translate_region(const Region& r, const std::vector<double>& shift) {
  if (shift.size() != r.dim()) throw std::invalid_argument("translate: dimension mismatch");
  for (double s : shift) require_finite(s);
  std::vector<Box> bs;
  for (Box b : r.box_parts()) {
    for (std::size_t i = 0; i < b.dim(); ++i) {
      b.lo[i] += shift[i];
      b.hi[i] += shift[i];
    }
    bs.push_back(std::move(b));
  }
  std::vector<Polygon> ps;
  for (Polygon p : r.polygon_parts()) {
    for (auto& v : p.pts) {
      v[0] += shift[0];
      v[1] += shift[1];
    }
    ps.push_back(std::move(p));
  }
  Region out = Region::empty(r.dim());
  if (!bs.empty()) out = Region::unite(out, Region::boxes(std::move(bs)));
  if (!ps.empty()) out = Region::unite(out, Region::polygons(std::move(ps)));
  return out;
}

Region transform_region(const Region& r, const std::vector<double>& shift,
                        const std::vector<double>& orthogonal) {
  const std::size_t d = r.dim();
  if (shift.size() != d) throw std::invalid_argument("transform: dimension mismatch");
  check_orthogonal(orthogonal, d);

  std::vector<int> axis;
  std::vector<double> sign;
  if (is_signed_permutation(orthogonal, d, &axis, &sign)) {
    // boxes map to boxes (up to a measure-zero boundary flip)
    std::vector<Box> bs;
    for (const Box& b : r.box_parts()) {
      Box nb;
      nb.lo.resize(d);
      nb.hi.resize(d);
      for (std::size_t i = 0; i < d; ++i) {
        const double a = sign[i] * b.lo[axis[i]];
        const double c = sign[i] * b.hi[axis[i]];
        nb.lo[i] = std::min(a, c) + shift[i];
        nb.hi[i] = std::max(a, c) + shift[i];
      }
      bs.push_back(std::move(nb));
    }
    Region out = Region::empty(d);
    if (!bs.empty()) out = Region::unite(out, Region::boxes(std::move(bs)));
    if (!r.polygon_parts().empty()) {
      Region polys = transform_region(Region::polygons(r.polygon_parts()), shift, orthogonal);
      out = Region::unite(out, polys);
    }
    return out;
  }

  if (d != 2)
    throw std::invalid_argument("transform: general rotations only supported in d=2");

  const double det = orthogonal[0] * orthogonal[3] - orthogonal[1] * orthogonal[2];
  auto map_point = [&](std::array<double, 2> p) {
    return std::array<double, 2>{orthogonal[0] * p[0] + orthogonal[1] * p[1] + shift[0],
                                 orthogonal[2] * p[0] + orthogonal[3] * p[1] + shift[1]};
  };

  std::vector<Polygon> parts;
  for (const Polygon& p : r.as_polygons()) {
    Polygon np;
    np.pts.reserve(p.pts.size());
    for (const auto& v : p.pts) np.pts.push_back(map_point(v));
    if (det < 0) std::reverse(np.pts.begin(), np.pts.end());
    parts.push_back(std::move(np));
  }
  if (parts.empty()) return Region::empty(d);
  return Region::polygons(std::move(parts));
}

// ---------------------------------------------------------------- Gram law

double GramLaw::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < n; ++i) t += at(i, i);
  return t;
}

void GramLaw::validate() const {
  params.validate();
  if (lambda.size() != n * n) throw std::invalid_argument("GramLaw: size mismatch");
  // Cauchy-Schwarz bound covers both intersection measures and the inner
  // products of integral families (where off-diagonals may exceed a
  // diagonal entry, e.g. the law of f and 2f)
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(at(i, j))) throw std::invalid_argument("GramLaw: non-finite entry");
      if (at(i, j) != at(j, i)) throw std::invalid_argument("GramLaw: not symmetric");
      if (i == j && at(i, i) < 0) throw std::invalid_argument("GramLaw: negative diagonal");
      if (i != j && std::abs(at(i, j)) >
                        std::sqrt(at(i, i) * at(j, j)) * (1 + 1e-12) + 1e-12 * trace())
        throw std::invalid_argument("GramLaw: off-diagonal violates Cauchy-Schwarz");
    }
}

GramLaw gram_matrix(const std::vector<Region>& regions, const GParams& p) {
  p.validate();
  const std::size_t n = regions.size();
  GramLaw law;
  law.n = n;
  law.params = p;
  law.lambda.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    law.lambda[i * n + i] = measure(regions[i]);
    law.labels.push_back("A" + std::to_string(i + 1));
    for (std::size_t j = 0; j < i; ++j) {
      const double m = intersect_measure(regions[i], regions[j]);
      law.lambda[i * n + j] = m;
      law.lambda[j * n + i] = m;
    }
  }
  return law;
}

GramLaw gram_from_matrix(std::vector<double> lambda, std::size_t n, const GParams& p) {
  GramLaw law;
  law.n = n;
  law.lambda = std::move(lambda);
  law.params = p;
  for (std::size_t i = 0; i < n; ++i) law.labels.push_back("A" + std::to_string(i + 1));
  law.validate();
  return law;
}

double contract_sorted(const std::vector<double>& q, const GramLaw& law) {
  if (q.size() != law.n * law.n)
    throw std::invalid_argument("contract_sorted: size mismatch");
  std::vector<double> terms;
  terms.reserve(q.size());
  for (std::size_t i = 0; i < law.n; ++i)
    for (std::size_t j = 0; j < law.n; ++j) {
      const double t = q[i * law.n + j] * law.at(i, j);
      if (t != 0.0) terms.push_back(t);  // zeros would perturb the pairwise tree
    }
  std::sort(terms.begin(), terms.end());
  return pairwise_sum(terms);
}

double gram_min_eigenvalue(const GramLaw& law) {
  if (law.n == 0) return 0.0;
  const auto eig = linalg::jacobi_eigen(law.lambda, law.n);
  return eig.values.front();
}

} // namespace gfield::geo
