#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace ballfix {

using PointId = std::size_t;
using PointSet = boost::dynamic_bitset<>;

PointSet make_set(std::size_t universe, std::initializer_list<PointId> members);
PointSet make_set(std::size_t universe, std::span<const PointId> members);
PointSet full_set(std::size_t universe);
PointSet singleton_set(std::size_t universe, PointId p);

std::vector<PointId> members(const PointSet& s);

/// Ordering used for deterministic tie-breaking: smaller cardinality first,
/// then lexicographic on the sorted member indices.
bool tie_break_less(const PointSet& a, const PointSet& b);

/// Proper inclusion a ⊊ b.
inline bool proper_subset(const PointSet& a, const PointSet& b) { return a.is_proper_subset_of(b); }

/// Either a ⊆ b or b ⊆ a.
inline bool comparable_by_inclusion(const PointSet& a, const PointSet& b) {
  return a.is_subset_of(b) || b.is_subset_of(a);
}

std::string format_set(const PointSet& s, std::span<const std::string> names);
std::string format_set(const PointSet& s);

}  // namespace ballfix
