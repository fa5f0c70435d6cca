#pragma once

// Finite partially ordered value sets with a least element.

#include "ballfix/error.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ballfix {

using ValueId = std::size_t;

class ValuePoset;

/// A value tagged with the identity of the poset it came from.
struct PosetValue {
  std::uint64_t poset = 0;
  ValueId id = 0;

  friend bool operator==(const PosetValue&, const PosetValue&) = default;
};

class ValuePoset {
 public:
  ValuePoset() = default;

  /// `leq` lists pairs (a,b) meaning a ≤ b. Reflexive pairs are implied. The
  /// relation must already be transitive and antisymmetric (Precondition
  /// otherwise) and `bottom` must lie below everything.
  ValuePoset(std::vector<std::string> names, const std::vector<std::pair<ValueId, ValueId>>& leq,
             ValueId bottom);

  /// As above, but takes the reflexive-transitive closure of `leq` first.
  static ValuePoset from_closure(std::vector<std::string> names,
                                 const std::vector<std::pair<ValueId, ValueId>>& leq, ValueId bottom);

  /// Loader form: names for values, pairs and bottom.
  static ValuePoset from_names(std::vector<std::string> names,
                               const std::vector<std::pair<std::string, std::string>>& leq,
                               std::string_view bottom);

  /// 0 < 1 < ... < n-1.
  static ValuePoset chain(std::size_t n);
  static ValuePoset chain(std::vector<std::string> names);
  static ValuePoset trivial() { return chain(1); }

  std::size_t size() const noexcept { return names_.size(); }
  ValueId bottom_id() const noexcept { return bottom_; }
  PosetValue bottom() const { return value(bottom_); }
  PosetValue value(ValueId id) const;
  PosetValue value(std::string_view name) const;
  ValueId id_of(std::string_view name) const;
  const std::string& name(ValueId id) const { return names_.at(id); }
  std::uint64_t uid() const noexcept { return uid_; }

  bool leq_id(ValueId a, ValueId b) const { return order_[a * size() + b]; }
  bool lt_id(ValueId a, ValueId b) const { return a != b && leq_id(a, b); }
  bool comparable_id(ValueId a, ValueId b) const { return leq_id(a, b) || leq_id(b, a); }

  /// Throws DomainMismatch when either value belongs to another poset.
  bool leq(PosetValue a, PosetValue b) const;
  bool lt(PosetValue a, PosetValue b) const;
  bool comparable(PosetValue a, PosetValue b) const;

  bool is_total() const;
  /// All (a,b) with a ≤ b.
  std::vector<std::pair<ValueId, ValueId>> relation() const;

 private:
  ValuePoset(std::vector<std::string> names, std::vector<char> order, ValueId bottom, int);
  void validate() const;
  void check(PosetValue v) const;

  std::vector<std::string> names_;
  std::vector<char> order_;
  ValueId bottom_ = 0;
  std::uint64_t uid_ = 0;
};

/// Componentwise order on pairs; value (i,j) has id i*|q| + j.
ValuePoset product_poset(const ValuePoset& p, const ValuePoset& q);

/// Free functions taking the poset explicitly.
bool leq(const ValuePoset& poset, PosetValue a, PosetValue b);
bool comparable(const ValuePoset& poset, PosetValue a, PosetValue b);

/// A random partial order on n elements with bottom 0: a random DAG over a
/// random linear extension, closed transitively.
ValuePoset random_poset(std::size_t n, double edge_probability, std::mt19937_64& rng);

}  // namespace ballfix
