// Finite unions of real intervals with open/closed endpoints and infinite
// bounds. This is the concrete domain for plant regions, sensor input
// ranges, and reachable sets.
#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdsyn/printer.hpp"

namespace sdsyn {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
  double lo = 0.0, hi = 0.0;
  bool lo_open = false, hi_open = false;

  static Interval closed(double a, double b) { return {a, b, false, false}; }
  static Interval open(double a, double b) { return {a, b, true, true}; }
  static Interval make(double a, bool ao, double b, bool bo) {
    return {a, b, ao, bo};
  }
  static Interval all() { return {-kInf, kInf, true, true}; }
  static Interval point(double a) { return {a, a, false, false}; }

  bool empty() const {
    if (lo > hi) return true;
    if (lo == hi) return lo_open || hi_open || std::isinf(lo);
    return false;
  }
  bool contains(double x, double eps = 0.0) const {
    if (empty()) return false;
    if (eps > 0.0) return x >= lo - eps && x <= hi + eps;
    if (x < lo || (x == lo && lo_open)) return false;
    if (x > hi || (x == hi && hi_open)) return false;
    return true;
  }
  double width() const { return empty() ? 0.0 : hi - lo; }

  // Representative point: midpoint when finite, otherwise one unit inside
  // the finite bound (zero when unbounded on both sides).
  double pick() const {
    bool li = std::isinf(lo), hi_ = std::isinf(hi);
    double v;
    if (li && hi_)
      v = 0.0;
    else if (li)
      v = hi - 1.0;
    else if (hi_)
      v = lo + 1.0;
    else
      v = 0.5 * (lo + hi);
    return v == 0.0 ? 0.0 : v;  // normalize -0
  }

  std::optional<Interval> intersect(const Interval& o) const {
    Interval r;
    if (lo > o.lo || (lo == o.lo && lo_open)) {
      r.lo = lo;
      r.lo_open = lo_open;
    } else {
      r.lo = o.lo;
      r.lo_open = o.lo_open;
    }
    if (hi < o.hi || (hi == o.hi && hi_open)) {
      r.hi = hi;
      r.hi_open = hi_open;
    } else {
      r.hi = o.hi;
      r.hi_open = o.hi_open;
    }
    if (r.empty()) return std::nullopt;
    return r;
  }
};

class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(Interval iv) {
    if (!iv.empty()) parts_.push_back(iv);
  }
  explicit IntervalSet(std::vector<Interval> parts)
      : parts_(std::move(parts)) {
    normalize();
  }

  static IntervalSet empty() { return IntervalSet(); }
  static IntervalSet all() { return IntervalSet(Interval::all()); }

  const std::vector<Interval>& parts() const { return parts_; }
  bool is_empty() const { return parts_.empty(); }

  bool contains(double x, double eps = 0.0) const {
    for (auto& p : parts_)
      if (p.contains(x, eps)) return true;
    return false;
  }

  double volume() const {
    double v = 0.0;
    for (auto& p : parts_) {
      if (std::isinf(p.lo) || std::isinf(p.hi)) return kInf;
      v += p.width();
    }
    return v;
  }

  IntervalSet intersect(const IntervalSet& o) const {
    std::vector<Interval> out;
    for (auto& a : parts_)
      for (auto& b : o.parts_)
        if (auto r = a.intersect(b)) out.push_back(*r);
    return IntervalSet(std::move(out));
  }

  IntervalSet unite(const IntervalSet& o) const {
    std::vector<Interval> out = parts_;
    out.insert(out.end(), o.parts_.begin(), o.parts_.end());
    return IntervalSet(std::move(out));
  }

  // Largest component by width; unbounded components win, ties go to the
  // leftmost. Empty set has no component.
  std::optional<Interval> largest_component() const {
    std::optional<Interval> best;
    double best_w = -1.0;
    for (auto& p : parts_) {
      double w = (std::isinf(p.lo) || std::isinf(p.hi)) ? kInf : p.width();
      if (w > best_w) {
        best_w = w;
        best = p;
      }
    }
    return best;
  }

  bool operator==(const IntervalSet& o) const {
    if (parts_.size() != o.parts_.size()) return false;
    for (size_t i = 0; i < parts_.size(); ++i) {
      const Interval &a = parts_[i], &b = o.parts_[i];
      if (a.lo != b.lo || a.hi != b.hi || a.lo_open != b.lo_open ||
          a.hi_open != b.hi_open)
        return false;
    }
    return true;
  }

 private:
  void normalize() {
    std::vector<Interval> in;
    for (auto& p : parts_)
      if (!p.empty()) in.push_back(p);
    std::sort(in.begin(), in.end(), [](const Interval& a, const Interval& b) {
      if (a.lo != b.lo) return a.lo < b.lo;
      return a.lo_open < b.lo_open;  // closed endpoint first
    });
    parts_.clear();
    for (auto& p : in) {
      if (!parts_.empty()) {
        Interval& c = parts_.back();
        bool overlaps = p.lo < c.hi || (p.lo == c.hi && (!p.lo_open || !c.hi_open));
        if (overlaps) {
          if (p.hi > c.hi || (p.hi == c.hi && c.hi_open && !p.hi_open)) {
            c.hi = p.hi;
            c.hi_open = p.hi_open;
          }
          continue;
        }
      }
      parts_.push_back(p);
    }
  }

  std::vector<Interval> parts_;
};

// --- text form: "[a,b] | (c,inf)" ------------------------------------------

inline std::string to_string(const Interval& iv) {
  std::string s;
  s += iv.lo_open ? "(" : "[";
  s += std::isinf(iv.lo) ? (iv.lo < 0 ? "-inf" : "inf") : format_real(iv.lo);
  s += ",";
  s += std::isinf(iv.hi) ? (iv.hi < 0 ? "-inf" : "inf") : format_real(iv.hi);
  s += iv.hi_open ? ")" : "]";
  return s;
}

inline std::string to_string(const IntervalSet& s) {
  if (s.is_empty()) return "()";
  std::string out;
  for (size_t i = 0; i < s.parts().size(); ++i) {
    if (i) out += " | ";
    out += to_string(s.parts()[i]);
  }
  return out;
}

inline IntervalSet parse_interval_set(const std::string& text) {
  std::vector<Interval> parts;
  size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
  };
  auto fail = [&](const std::string& msg) -> void {
    throw std::runtime_error("bad interval '" + text + "': " + msg);
  };
  auto number = [&]() -> double {
    skip_ws();
    size_t start = i;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
    if (text.compare(i, 3, "inf") == 0) {
      i += 3;
      return text[start] == '-' ? -kInf : kInf;
    }
    char* end = nullptr;
    double v = std::strtod(text.c_str() + start, &end);
    if (end == text.c_str() + start) fail("expected number");
    i = static_cast<size_t>(end - text.c_str());
    return v;
  };
  skip_ws();
  if (text.compare(i, 2, "()") == 0) return IntervalSet::empty();
  while (true) {
    skip_ws();
    if (i >= text.size() || (text[i] != '[' && text[i] != '('))
      fail("expected '[' or '('");
    Interval iv;
    iv.lo_open = text[i] == '(';
    ++i;
    iv.lo = number();
    skip_ws();
    if (i >= text.size() || text[i] != ',') fail("expected ','");
    ++i;
    iv.hi = number();
    skip_ws();
    if (i >= text.size() || (text[i] != ']' && text[i] != ')'))
      fail("expected ']' or ')'");
    iv.hi_open = text[i] == ')';
    ++i;
    if (std::isinf(iv.lo)) iv.lo_open = true;
    if (std::isinf(iv.hi)) iv.hi_open = true;
    parts.push_back(iv);
    skip_ws();
    if (i < text.size() && text[i] == '|') {
      ++i;
      continue;
    }
    break;
  }
  skip_ws();
  if (i != text.size()) fail("trailing characters");
  return IntervalSet(std::move(parts));
}

}  // namespace sdsyn
