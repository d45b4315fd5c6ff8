// Hypothesis sets over the parameter space: finite point sets, closed
// intervals, and unions of intervals, with the compact CLI grammar
//   "{1,2,3}"   "[7.7,8]"   "[0,0.2]U[0.8,1]"
#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "possim/errors.hpp"

namespace possim {

class HypothesisSet {
 public:
  enum class Form { FinitePoints, Intervals };

  static HypothesisSet points(std::vector<double> pts) {
    if (pts.empty()) throw spec_error("hypothesis: empty point set");
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    HypothesisSet h;
    h.form_ = Form::FinitePoints;
    h.points_ = std::move(pts);
    return h;
  }

  static HypothesisSet interval(double lo, double hi) {
    return intervals({{lo, hi}});
  }

  static HypothesisSet intervals(std::vector<std::pair<double, double>> iv) {
    if (iv.empty()) throw spec_error("hypothesis: empty interval list");
    for (auto& [lo, hi] : iv)
      if (!(std::isfinite(lo) && std::isfinite(hi) && lo <= hi))
        throw spec_error("hypothesis: interval needs finite lo <= hi");
    std::sort(iv.begin(), iv.end());
    // merge overlapping/touching intervals so membership is canonical
    std::vector<std::pair<double, double>> merged;
    for (auto& [lo, hi] : iv) {
      if (!merged.empty() && lo <= merged.back().second)
        merged.back().second = std::max(merged.back().second, hi);
      else
        merged.emplace_back(lo, hi);
    }
    HypothesisSet h;
    h.form_ = Form::Intervals;
    h.intervals_ = std::move(merged);
    return h;
  }

  // Grammar: "{p1,p2,...}" | "[lo,hi]" | "[lo,hi]U[lo,hi]U..."
  static HypothesisSet parse(std::string_view text) {
    std::string compact;
    compact.reserve(text.size());
    for (char ch : text)
      if (!std::isspace(static_cast<unsigned char>(ch))) compact.push_back(ch);
    if (compact.empty()) throw spec_error("hypothesis: empty string");

    if (compact.front() == '{') {
      if (compact.back() != '}')
        throw spec_error("hypothesis: expected closing '}' in \"" + compact + "\"");
      auto vals = parse_number_list(compact.substr(1, compact.size() - 2), compact);
      return points(std::move(vals));
    }

    std::vector<std::pair<double, double>> iv;
    std::string_view rest = compact;
    while (!rest.empty()) {
      if (rest.front() != '[')
        throw spec_error("hypothesis: expected '[' in \"" + compact + "\"");
      auto close = rest.find(']');
      if (close == std::string_view::npos)
        throw spec_error("hypothesis: missing ']' in \"" + compact + "\"");
      auto body = rest.substr(1, close - 1);
      auto vals = parse_number_list(body, compact);
      if (vals.size() != 2)
        throw spec_error("hypothesis: interval needs exactly two endpoints in \"" +
                         compact + "\"");
      iv.emplace_back(vals[0], vals[1]);
      rest.remove_prefix(close + 1);
      if (!rest.empty()) {
        if (rest.front() != 'U' && rest.front() != 'u')
          throw spec_error("hypothesis: expected 'U' between intervals in \"" +
                           compact + "\"");
        rest.remove_prefix(1);
        if (rest.empty())
          throw spec_error("hypothesis: trailing 'U' in \"" + compact + "\"");
      }
    }
    return intervals(std::move(iv));
  }

  Form form() const { return form_; }
  const std::vector<double>& point_members() const { return points_; }
  const std::vector<std::pair<double, double>>& interval_members() const {
    return intervals_;
  }

  // Membership with relative slack so grid points computed by repeated
  // addition still land on their intended endpoints.
  bool contains(double v, double tol = 1e-9) const {
    if (form_ == Form::FinitePoints) {
      auto it = std::lower_bound(points_.begin(), points_.end(),
                                 v - slack(v, tol));
      return it != points_.end() && std::abs(*it - v) <= slack(v, tol);
    }
    for (auto& [lo, hi] : intervals_) {
      if (v < lo - slack(lo, tol)) return false;
      if (v <= hi + slack(hi, tol)) return true;
    }
    return false;
  }

  // Union within a common form; mixed forms are outside the grammar.
  HypothesisSet union_with(const HypothesisSet& other) const {
    if (form_ != other.form_)
      throw spec_error("hypothesis: union of mixed forms not supported");
    if (form_ == Form::FinitePoints) {
      auto pts = points_;
      pts.insert(pts.end(), other.points_.begin(), other.points_.end());
      return points(std::move(pts));
    }
    auto iv = intervals_;
    iv.insert(iv.end(), other.intervals_.begin(), other.intervals_.end());
    return intervals(std::move(iv));
  }

  double min_value() const {
    return form_ == Form::FinitePoints ? points_.front() : intervals_.front().first;
  }
  double max_value() const {
    return form_ == Form::FinitePoints ? points_.back() : intervals_.back().second;
  }

  std::string to_string() const {
    std::string out;
    if (form_ == Form::FinitePoints) {
      out = "{";
      for (std::size_t i = 0; i < points_.size(); ++i) {
        if (i) out += ",";
        out += format(points_[i]);
      }
      out += "}";
      return out;
    }
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
      if (i) out += "U";
      out += "[" + format(intervals_[i].first) + "," + format(intervals_[i].second) + "]";
    }
    return out;
  }

 private:
  HypothesisSet() = default;

  static double slack(double v, double tol) {
    return tol * std::max(1.0, std::abs(v));
  }

  static std::string format(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
  }

  static std::vector<double> parse_number_list(std::string_view body,
                                               const std::string& whole) {
    if (body.empty())
      throw spec_error("hypothesis: empty list in \"" + whole + "\"");
    std::vector<double> vals;
    std::size_t pos = 0;
    while (pos <= body.size()) {
      auto comma = body.find(',', pos);
      auto tok = body.substr(pos, comma == std::string_view::npos ? body.size() - pos
                                                                  : comma - pos);
      if (tok.empty())
        throw spec_error("hypothesis: empty number in \"" + whole + "\"");
      double v = 0.0;
      auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size() ||
          !std::isfinite(v))
        throw spec_error("hypothesis: bad number \"" + std::string(tok) + "\" in \"" +
                         whole + "\"");
      vals.push_back(v);
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    return vals;
  }

  Form form_ = Form::Intervals;
  std::vector<double> points_;
  std::vector<std::pair<double, double>> intervals_;
};

}  // namespace possim
