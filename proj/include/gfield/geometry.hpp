#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gfield/sublinear.hpp"

// Region algebra over R^d: finite unions of half-open boxes in any
// dimension, plus convex polygons in d=2 for rotation tests.  Box unions
// are normalized to disjoint parts by a coordinate sweep, so measures are
// plain sums of products; polygon measures use inclusion-exclusion with
// convex clipping.
namespace gfield::geo {

struct Box {
  std::vector<double> lo, hi;  // half-open (lo, hi]

  std::size_t dim() const { return lo.size(); }
  double volume() const;
  void validate() const;  // lo_i <= hi_i, finite coordinates

  static std::optional<Box> intersection(const Box& a, const Box& b);
};

struct Polygon {
  std::vector<std::array<double, 2>> pts;  // convex, counter-clockwise

  double area() const;    // shoelace
  void validate() const;  // convex + CCW (rules out self-intersection)
};

// Intersection of two convex polygons (Sutherland-Hodgman).
Polygon clip_convex(const Polygon& subject, const Polygon& clip);

class Region {
 public:
  Region() = default;

  static Region box(Box b);
  static Region boxes(std::vector<Box> bs);
  static Region polygon(Polygon p);
  static Region polygons(std::vector<Polygon> ps);
  static Region unite(const Region& a, const Region& b);
  static Region empty(std::size_t dim);

  std::size_t dim() const { return dim_; }
  bool is_empty() const { return boxes_.empty() && polys_.empty(); }
  bool has_polygons() const { return !polys_.empty(); }

  const std::vector<Box>& box_parts() const { return boxes_; }
  const std::vector<Polygon>& polygon_parts() const { return polys_; }

  // input boxes split against the joint coordinate grid; pairwise disjoint
  const std::vector<Box>& disjoint_box_parts() const;

  // every part as a polygon (d=2 only)
  std::vector<Polygon> as_polygons() const;

 private:
  std::size_t dim_ = 0;
  std::vector<Box> boxes_;
  std::vector<Polygon> polys_;
  mutable std::vector<Box> normalized_;
  mutable bool normalized_valid_ = false;
};

double measure(const Region& r);
double intersect_measure(const Region& a, const Region& b);
Region intersect(const Region& a, const Region& b);

// Rigid motion x -> O x + shift.  Pure translations work in any dimension,
// as do signed-permutation matrices (axis permutations and reflections);
// a general orthogonal O is supported in d=2 and turns boxes into polygons.
// O is row-major d*d and must be orthogonal within 1e-12.
Region transform_region(const Region& r, const std::vector<double>& shift,
                        const std::vector<double>& orthogonal);
Region translate_region(const Region& r, const std::vector<double>& shift);

// ---- Gram law ----

struct GramLaw {
  std::size_t n = 0;
  std::vector<double> lambda;  // n*n, lambda_ij = |A_i intersect A_j|
  GParams params;
  std::vector<std::string> labels;

  double at(std::size_t i, std::size_t j) const { return lambda[i * n + j]; }
  double trace() const;
  void validate() const;  // symmetry, lambda_ij <= min(lambda_ii, lambda_jj)
};

GramLaw gram_matrix(const std::vector<Region>& regions, const GParams& p);
GramLaw gram_from_matrix(std::vector<double> lambda, std::size_t n, const GParams& p);

// <Q, Lambda> with the n*n products summed in ascending order, so results
// are invariant under relabeling of equal term multisets.  Consistency
// checks rely on this to assert exact equality.
double contract_sorted(const std::vector<double>& q, const GramLaw& law);

// smallest eigenvalue of Lambda (PSD check)
double gram_min_eigenvalue(const GramLaw& law);

} // namespace gfield::geo
