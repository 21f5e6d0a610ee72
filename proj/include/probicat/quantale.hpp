#pragma once

#include <algorithm>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"

namespace probicat {

/// A finite commutative unital quantale on the carrier {0, ..., n-1}.
///
/// The order is the reflexive-transitive closure of the supplied pairs; joins
/// and meets are derived from it by exhaustive scan and are -1 where the order
/// has no least upper (greatest lower) bound. Such a structure can still be
/// constructed so that check_quantale can report the defect.
class Quantale {
 public:
  using Element = int;

  Quantale(std::vector<std::string> labels,
           const std::vector<std::pair<int, int>>& leq_pairs,
           std::vector<int> tensor, int unit)
      : labels_(std::move(labels)),
        n_(static_cast<int>(labels_.size())),
        tensor_(std::move(tensor)),
        unit_(unit) {
    if (n_ == 0) throw InputError("quantale carrier is empty");
    if (tensor_.size() != static_cast<std::size_t>(n_ * n_))
      throw InputError("tensor table is not total over the carrier");
    if (!contains(unit_)) throw InputError("unit is not a carrier element");
    for (int t : tensor_)
      if (!contains(t)) throw InputError("tensor table leaves the carrier");

    leq_.assign(n_ * n_, 0);
    for (int a = 0; a < n_; ++a) leq_[a * n_ + a] = 1;
    for (auto [a, b] : leq_pairs) {
      if (!contains(a) || !contains(b))
        throw InputError("leq pair mentions a non-carrier element");
      leq_[a * n_ + b] = 1;
    }
    // Warshall closure.
    for (int k = 0; k < n_; ++k)
      for (int i = 0; i < n_; ++i)
        if (leq_[i * n_ + k])
          for (int j = 0; j < n_; ++j)
            if (leq_[k * n_ + j]) leq_[i * n_ + j] = 1;

    join_.assign(n_ * n_, -1);
    meet_.assign(n_ * n_, -1);
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) {
        join_[a * n_ + b] = least_upper_bound({a, b});
        meet_[a * n_ + b] = greatest_lower_bound({a, b});
      }
    bottom_ = least_upper_bound({});
    top_ = greatest_lower_bound({});
  }

  /// Two-element Boolean algebra with conjunction as tensor.
  static Quantale boolean() {
    return Quantale({"0", "1"}, {{0, 1}}, {0, 0, 0, 1}, 1);
  }

  /// The n-chain 0 < 1 < ... < n-1 with tensor = meet, unit = top.
  static Quantale chain(int n) {
    if (n < 2) throw InputError("chain quantale needs n >= 2");
    std::vector<std::string> labels;
    std::vector<std::pair<int, int>> order;
    std::vector<int> tensor(n * n);
    for (int a = 0; a < n; ++a) {
      labels.push_back(std::to_string(a));
      if (a + 1 < n) order.emplace_back(a, a + 1);
      for (int b = 0; b < n; ++b) tensor[a * n + b] = std::min(a, b);
    }
    return Quantale(std::move(labels), order, std::move(tensor), n - 1);
  }

  /// Truncated tropical quantale: carrier {0, ..., cap} ordered by reversed
  /// numeric order (join = numeric min), tensor = addition capped at cap,
  /// unit 0.
  static Quantale tropical(int cap) {
    if (cap < 1) throw InputError("tropical quantale needs cap >= 1");
    const int n = cap + 1;
    std::vector<std::string> labels;
    std::vector<std::pair<int, int>> order;
    std::vector<int> tensor(n * n);
    for (int a = 0; a < n; ++a) {
      labels.push_back(std::to_string(a));
      if (a + 1 < n) order.emplace_back(a + 1, a);
      for (int b = 0; b < n; ++b) tensor[a * n + b] = std::min(a + b, cap);
    }
    return Quantale(std::move(labels), order, std::move(tensor), 0);
  }

  int size() const { return n_; }
  bool contains(int a) const { return a >= 0 && a < n_; }
  const std::string& label(int a) const { return labels_.at(a); }
  const std::vector<std::string>& labels() const { return labels_; }

  bool leq(int a, int b) const { return leq_[a * n_ + b] != 0; }
  int tensor(int a, int b) const { return tensor_[a * n_ + b]; }
  int unit() const { return unit_; }
  int join(int a, int b) const { return join_[a * n_ + b]; }
  int meet(int a, int b) const { return meet_[a * n_ + b]; }
  int bottom() const { return bottom_; }
  int top() const { return top_; }

  int join_all(std::span<const int> xs) const {
    int acc = bottom_;
    for (int x : xs) acc = join(acc, x);
    return acc;
  }
  int meet_all(std::span<const int> xs) const {
    int acc = top_;
    for (int x : xs) acc = meet(acc, x);
    return acc;
  }

  /// Right adjoint to a ⊗ -: the join of {x : a ⊗ x ≤ b}.
  int residual(int a, int b) const {
    int acc = bottom_;
    for (int x = 0; x < n_; ++x)
      if (leq(tensor(a, x), b)) acc = join(acc, x);
    return acc;
  }

  /// Least upper bound of an arbitrary subset, or -1 if none exists.
  int least_upper_bound(const std::vector<int>& xs) const {
    int best = -1;
    for (int u = 0; u < n_; ++u) {
      bool upper = std::all_of(xs.begin(), xs.end(),
                               [&](int x) { return leq(x, u); });
      if (!upper) continue;
      if (best == -1 || leq(u, best)) best = u;
    }
    if (best == -1) return -1;
    for (int u = 0; u < n_; ++u) {
      bool upper = std::all_of(xs.begin(), xs.end(),
                               [&](int x) { return leq(x, u); });
      if (upper && !leq(best, u)) return -1;
    }
    return best;
  }

  int greatest_lower_bound(const std::vector<int>& xs) const {
    int best = -1;
    for (int l = 0; l < n_; ++l) {
      bool lower = std::all_of(xs.begin(), xs.end(),
                               [&](int x) { return leq(l, x); });
      if (!lower) continue;
      if (best == -1 || leq(best, l)) best = l;
    }
    if (best == -1) return -1;
    for (int l = 0; l < n_; ++l) {
      bool lower = std::all_of(xs.begin(), xs.end(),
                               [&](int x) { return leq(l, x); });
      if (lower && !leq(l, best)) return -1;
    }
    return best;
  }

  friend bool operator==(const Quantale& a, const Quantale& b) {
    return a.n_ == b.n_ && a.leq_ == b.leq_ && a.tensor_ == b.tensor_ &&
           a.unit_ == b.unit_;
  }

 private:
  std::vector<std::string> labels_;
  int n_;
  std::vector<int> tensor_;
  int unit_;
  std::vector<char> leq_;
  std::vector<int> join_;
  std::vector<int> meet_;
  int bottom_ = -1;
  int top_ = -1;
};

using QuantalePtr = std::shared_ptr<const Quantale>;

enum class QuantaleKind { boolean, chain, tropical };

inline Quantale make_quantale(QuantaleKind kind, int parameter = 0) {
  switch (kind) {
    case QuantaleKind::boolean:
      return Quantale::boolean();
    case QuantaleKind::chain:
      return Quantale::chain(parameter);
    case QuantaleKind::tropical:
      return Quantale::tropical(parameter);
  }
  throw InputError("unknown quantale kind");
}

/// Exhaustive law check. Reports the first violated law with concrete
/// elements, in the order: partial order, lattice, commutativity,
/// associativity, unit, distributivity over binary then empty joins.
inline Validation check_quantale(const Quantale& q) {
  const int n = q.size();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b && q.leq(a, b) && q.leq(b, a))
        return Validation::fail("antisymmetry",
                                "distinct elements are mutually below",
                                {{"a", a}, {"b", b}});
  if (q.bottom() < 0 || q.top() < 0)
    return Validation::fail("lattice", "order has no bottom or no top");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (q.join(a, b) < 0)
        return Validation::fail("lattice", "pair has no join",
                                {{"a", a}, {"b", b}});
      if (q.meet(a, b) < 0)
        return Validation::fail("lattice", "pair has no meet",
                                {{"a", a}, {"b", b}});
    }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (q.tensor(a, b) != q.tensor(b, a))
        return Validation::fail("commutativity", "a⊗b != b⊗a",
                                {{"a", a}, {"b", b}});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (q.tensor(q.tensor(a, b), c) != q.tensor(a, q.tensor(b, c)))
          return Validation::fail("associativity", "(a⊗b)⊗c != a⊗(b⊗c)",
                                  {{"a", a}, {"b", b}, {"c", c}});
  for (int a = 0; a < n; ++a)
    if (q.tensor(q.unit(), a) != a)
      return Validation::fail("unit", "unit⊗a != a",
                              {{"a", a}, {"unit", q.unit()}});
  // Distributivity over every finite subset reduces, on a finite lattice, to
  // binary joins plus the empty join.
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (q.tensor(a, q.join(b, c)) !=
            q.join(q.tensor(a, b), q.tensor(a, c)))
          return Validation::fail("distributivity",
                                  "a⊗(b∨c) != (a⊗b)∨(a⊗c)",
                                  {{"a", a}, {"b", b}, {"c", c}});
  for (int a = 0; a < n; ++a)
    if (q.tensor(a, q.bottom()) != q.bottom())
      return Validation::fail("distributivity", "a⊗⊥ != ⊥",
                              {{"a", a}, {"bottom", q.bottom()}});
  return Validation::pass();
}

/// A value of the ground category V: a quantale element or a finite set
/// {0, ..., n-1}.
struct VObject {
  Backend backend = Backend::quantale;
  int element = 0;
  int cardinality = 0;

  static VObject of_element(int e) { return {Backend::quantale, e, 0}; }
  static VObject of_set(int n) { return {Backend::finset, 0, n}; }

  friend bool operator==(const VObject&, const VObject&) = default;

  json to_json() const {
    if (backend == Backend::quantale) return {{"element", element}};
    return {{"cardinality", cardinality}};
  }
};

}  // namespace probicat
