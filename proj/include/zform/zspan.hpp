#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zform/fock.hpp"

namespace zform {

// Z-row-span of rational vectors, stored as (integer HNF rows) / den with den
// minimal. Rows are ordered by strictly increasing pivot column, pivots are
// positive and entries above a pivot are reduced into [0, pivot).
class ZSpanSlice {
 public:
  explicit ZSpanSlice(std::size_t dim = 0) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return rows_.size(); }
  const Integer& denominator() const { return den_; }
  const std::vector<IntVector>& rows() const { return rows_; }

  // Returns true when the span grew.
  bool insert(const RatVector& v);
  std::optional<IntVector> membership(const RatVector& v) const;
  bool contains(const RatVector& v) const { return membership(v).has_value(); }
  std::vector<RatVector> basis() const;
  bool contains_all(const ZSpanSlice& other) const;

  bool operator==(const ZSpanSlice& other) const = default;

 private:
  void rescale(const Integer& new_den);
  void reduce_above(std::size_t r);
  void normalize();

  std::size_t dim_;
  Integer den_ = 1;
  std::vector<IntVector> rows_;
  std::vector<std::size_t> pivots_;
};

ZSpanSlice hnf(const std::vector<RatVector>& rows, std::size_t dim);

using GradedZSpan = std::map<Bidegree, ZSpanSlice>;

// Inserts the homogeneous components of v (coordinates in the monomial frames).
bool insert_element(GradedZSpan& span, const Lattice& L, const FockElement& v);
bool contains_element(const GradedZSpan& span, const Lattice& L, const FockElement& v);
ZSpanSlice& slice_at(GradedZSpan& span, const Lattice& L, const Bidegree& d);

struct SliceVerdict {
  Bidegree degree;
  std::size_t dim = 0;
  std::size_t rank_a = 0;
  std::size_t rank_b = 0;
  bool full_rank = false;
  bool equal = false;
  std::optional<RatVector> witness;  // in one span but not the other
  bool ok() const { return full_rank && equal; }
};

struct IntegralFormVerdict {
  std::vector<SliceVerdict> slices;
  bool ok() const;
};

// For each listed bidegree: rank(A) = dim and A = B as Z-modules.
IntegralFormVerdict certify_integral_form(const Lattice& L, const GradedZSpan& a,
                                          const GradedZSpan& b,
                                          const std::vector<Bidegree>& degrees);

std::string render_verdict(const IntegralFormVerdict& v);

}  // namespace zform
