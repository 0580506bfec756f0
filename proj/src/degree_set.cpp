#include "polyaforge/degree_set.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

namespace polyaforge {

DegreeSet::DegreeSet(std::vector<int> finite, std::optional<int> tail_min)
    : finite_(std::move(finite)), tail_(tail_min) {
  for (int v : finite_) {
    if (v < 0) throw InvalidDegreeSet("degree sets hold non-negative integers");
  }
  if (tail_ && *tail_ < 0) throw InvalidDegreeSet("tail start must be non-negative");
  std::sort(finite_.begin(), finite_.end());
  finite_.erase(std::unique(finite_.begin(), finite_.end()), finite_.end());
  if (tail_) {
    std::erase_if(finite_, [&](int v) { return v >= *tail_; });
    while (*tail_ > 0 && !finite_.empty() && finite_.back() == *tail_ - 1) {
      --*tail_;
      finite_.pop_back();
    }
  }
}

DegreeSet DegreeSet::parse(std::string_view text) {
  std::vector<int> finite;
  std::optional<int> tail;
  std::size_t pos = 0;
  if (text.empty()) throw InvalidDegreeSet("empty degree set");
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view tok = text.substr(pos, comma - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    bool plus = !tok.empty() && tok.back() == '+';
    if (plus) tok.remove_suffix(1);
    int value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
      throw InvalidDegreeSet("cannot parse degree set '" + std::string(text) + "'");
    }
    if (plus) {
      if (tail) throw InvalidDegreeSet("at most one 't+' term allowed");
      tail = value;
    } else {
      finite.push_back(value);
    }
    pos = comma + 1;
  }
  return DegreeSet(std::move(finite), tail);
}

bool DegreeSet::contains(long long k) const {
  if (k < 0) return false;
  if (tail_ && k >= *tail_) return true;
  return std::binary_search(finite_.begin(), finite_.end(), static_cast<int>(k));
}

int DegreeSet::cap() const {
  if (tail_) return *tail_;
  return finite_.empty() ? 0 : finite_.back() + 1;
}

bool DegreeSet::contains_capped(int c) const {
  int C = cap();
  if (c >= C) return tail_.has_value();
  return contains(c);
}

int DegreeSet::max_element() const {
  if (tail_) throw InvalidDegreeSet("cofinite set has no maximum");
  if (finite_.empty()) throw InvalidDegreeSet("empty set has no maximum");
  return finite_.back();
}

DegreeSet DegreeSet::shifted(int shift) const {
  std::vector<int> out;
  for (int v : finite_) {
    if (v >= shift) out.push_back(v - shift);
  }
  std::optional<int> t;
  if (tail_) t = std::max(*tail_ - shift, 0);
  return DegreeSet(std::move(out), t);
}

int DegreeSet::period() const {
  if (tail_) return 1;
  int g = 0;
  for (int v : finite_) g = std::gcd(g, v);
  return g;
}

std::string DegreeSet::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int v : finite_) {
    if (!first) os << ',';
    os << v;
    first = false;
  }
  if (tail_) {
    if (!first) os << ',';
    os << *tail_ << '+';
  }
  if (first && !tail_) os << "{}";
  return os.str();
}

void validate_omega_star(const DegreeSet& omega_star) {
  if (!omega_star.contains(0)) {
    throw InvalidDegreeSet("outdegree set " + omega_star.to_string() + " must contain 0");
  }
  bool has_branching = omega_star.is_cofinite();
  for (int v : omega_star.finite_part()) has_branching = has_branching || v >= 2;
  if (!has_branching) {
    throw InvalidDegreeSet("outdegree set " + omega_star.to_string() + " needs some k >= 2");
  }
}

DegreeRestriction DegreeRestriction::from_omega(DegreeSet omega) {
  if (omega.contains(0)) throw InvalidDegreeSet("degree set must consist of positive integers");
  if (!omega.contains(1)) {
    throw InvalidDegreeSet("degree set " + omega.to_string() + " must contain 1");
  }
  bool big = omega.is_cofinite();
  for (int v : omega.finite_part()) big = big || v >= 3;
  if (!big) {
    throw InvalidDegreeSet("degree set " + omega.to_string() + " needs some degree >= 3");
  }
  DegreeRestriction r;
  r.omega_star = omega.shifted(1);
  r.omega = std::move(omega);
  r.period = r.omega_star.period();
  return r;
}

bool DegreeRestriction::size_admissible(long long n) const {
  if (n == 1) return true;
  if (n < 2) return false;
  return (n - 2) % period == 0;
}

}  // namespace polyaforge
