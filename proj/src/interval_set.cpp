#include "harmex/interval_set.hpp"

#include <algorithm>
#include <stdexcept>

namespace harmex {

IntervalSet::IntervalSet(std::initializer_list<Interval> parts) {
  for (const auto& p : parts) add(p.lo, p.hi);
}

void IntervalSet::add(double lo, double hi) {
  if (lo < 0.0 || hi > 1.0) throw std::domain_error("IntervalSet: endpoints must lie in [0, 1]");
  if (!(hi > lo)) return;
  parts_.push_back({lo, hi});
  std::sort(parts_.begin(), parts_.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> merged;
  merged.reserve(parts_.size());
  for (const auto& p : parts_) {
    if (!merged.empty() && p.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, p.hi);
    } else {
      merged.push_back(p);
    }
  }
  parts_ = std::move(merged);
}

IntervalSet IntervalSet::united(const IntervalSet& other) const {
  IntervalSet out = *this;
  for (const auto& p : other.parts_) out.add(p.lo, p.hi);
  return out;
}

IntervalSet IntervalSet::intersected(const IntervalSet& other) const {
  IntervalSet out;
  for (const auto& a : parts_) {
    for (const auto& b : other.parts_) {
      out.add(std::max(a.lo, b.lo), std::min(a.hi, b.hi));
    }
  }
  return out;
}

IntervalSet IntervalSet::complement() const {
  IntervalSet out;
  double cursor = 0.0;
  for (const auto& p : parts_) {
    out.add(cursor, p.lo);
    cursor = p.hi;
  }
  out.add(cursor, 1.0);
  return out;
}

bool IntervalSet::contains(double r) const {
  return std::any_of(parts_.begin(), parts_.end(),
                     [r](const Interval& p) { return p.lo <= r && r < p.hi; });
}

double IntervalSet::total_length() const {
  double sum = 0.0;
  for (const auto& p : parts_) sum += p.length();
  return sum;
}

}  // namespace harmex
