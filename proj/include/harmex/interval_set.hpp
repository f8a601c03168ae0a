#ifndef HARMEX_INTERVAL_SET_HPP
#define HARMEX_INTERVAL_SET_HPP

#include <initializer_list>
#include <vector>

namespace harmex {

/// Half-open interval [lo, hi) of radii.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

/// Finite union of disjoint half-open subintervals of [0, 1).
///
/// Intervals are kept sorted with lo_i < hi_i <= lo_{i+1}; touching
/// intervals are merged. An interval whose right end is 1 marks a set that
/// reaches the boundary of the ball.
class IntervalSet {
 public:
  IntervalSet() = default;
  IntervalSet(std::initializer_list<Interval> parts);

  static IntervalSet whole() { return IntervalSet{{0.0, 1.0}}; }

  /// Adds [lo, hi) and re-normalizes. Empty or inverted input is ignored.
  void add(double lo, double hi);

  IntervalSet united(const IntervalSet& other) const;
  IntervalSet intersected(const IntervalSet& other) const;
  /// Complement inside [0, 1).
  IntervalSet complement() const;

  bool empty() const { return parts_.empty(); }
  bool contains(double r) const;
  bool reaches_boundary() const { return !parts_.empty() && parts_.back().hi >= 1.0; }
  /// Largest right endpoint, 0 for the empty set.
  double sup() const { return parts_.empty() ? 0.0 : parts_.back().hi; }
  double total_length() const;

  const std::vector<Interval>& intervals() const { return parts_; }
  bool operator==(const IntervalSet&) const = default;

 private:
  std::vector<Interval> parts_;
};

}  // namespace harmex

#endif  // HARMEX_INTERVAL_SET_HPP
