#include "ballfix/value_poset.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <set>

namespace ballfix {

namespace {

std::atomic<std::uint64_t> next_uid{1};

std::vector<char> closure_matrix(std::size_t n, const std::vector<std::pair<ValueId, ValueId>>& leq) {
  std::vector<char> m(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 1;
  for (auto [a, b] : leq) {
    if (a >= n || b >= n) throw Error(ErrorKind::Precondition, "order pair names an unknown value");
    m[a * n + b] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (m[i * n + k])
        for (std::size_t j = 0; j < n; ++j)
          if (m[k * n + j]) m[i * n + j] = 1;
  return m;
}

}  // namespace

ValuePoset::ValuePoset(std::vector<std::string> names, std::vector<char> order, ValueId bottom, int)
    : names_(std::move(names)), order_(std::move(order)), bottom_(bottom), uid_(next_uid++) {
  validate();
}

ValuePoset::ValuePoset(std::vector<std::string> names, const std::vector<std::pair<ValueId, ValueId>>& leq,
                       ValueId bottom)
    : names_(std::move(names)), bottom_(bottom), uid_(next_uid++) {
  const std::size_t n = names_.size();
  order_.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) order_[i * n + i] = 1;
  for (auto [a, b] : leq) {
    if (a >= n || b >= n) throw Error(ErrorKind::Precondition, "order pair names an unknown value");
    order_[a * n + b] = 1;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (order_[i * n + j] && order_[j * n + k] && !order_[i * n + k])
          throw Error(ErrorKind::Precondition,
                      "relation is not transitive at " + names_[i] + " ≤ " + names_[j] + " ≤ " + names_[k]);
  validate();
}

ValuePoset ValuePoset::from_closure(std::vector<std::string> names,
                                    const std::vector<std::pair<ValueId, ValueId>>& leq, ValueId bottom) {
  auto m = closure_matrix(names.size(), leq);
  return ValuePoset(std::move(names), std::move(m), bottom, 0);
}

ValuePoset ValuePoset::from_names(std::vector<std::string> names,
                                  const std::vector<std::pair<std::string, std::string>>& leq,
                                  std::string_view bottom) {
  std::map<std::string, ValueId, std::less<>> index;
  for (ValueId i = 0; i < names.size(); ++i)
    if (!index.emplace(names[i], i).second) throw Error(ErrorKind::Precondition, "duplicate value " + names[i]);
  auto lookup = [&](std::string_view s) {
    auto it = index.find(s);
    if (it == index.end()) throw Error(ErrorKind::Precondition, "unknown value '" + std::string(s) + "'");
    return it->second;
  };
  std::vector<std::pair<ValueId, ValueId>> pairs;
  for (const auto& [a, b] : leq) pairs.emplace_back(lookup(a), lookup(b));
  const ValueId bot = lookup(bottom);
  return from_closure(std::move(names), pairs, bot);
}

ValuePoset ValuePoset::chain(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
  return chain(std::move(names));
}

ValuePoset ValuePoset::chain(std::vector<std::string> names) {
  const std::size_t n = names.size();
  std::vector<char> m(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m[i * n + j] = 1;
  return ValuePoset(std::move(names), std::move(m), 0, 0);
}

void ValuePoset::validate() const {
  const std::size_t n = names_.size();
  if (n == 0) throw Error(ErrorKind::Precondition, "value poset must be nonempty");
  if (bottom_ >= n) throw Error(ErrorKind::Precondition, "bottom is not a value of the poset");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (order_[i * n + j] && order_[j * n + i])
        throw Error(ErrorKind::Precondition, "relation is not antisymmetric on " + names_[i] + ", " + names_[j]);
  for (std::size_t i = 0; i < n; ++i)
    if (!order_[bottom_ * n + i])
      throw Error(ErrorKind::Precondition, "bottom " + names_[bottom_] + " is not below " + names_[i]);
}

PosetValue ValuePoset::value(ValueId id) const {
  if (id >= size()) throw Error(ErrorKind::DomainMismatch, "value id outside the poset");
  return PosetValue{uid_, id};
}

ValueId ValuePoset::id_of(std::string_view name) const {
  for (ValueId i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  throw Error(ErrorKind::DomainMismatch, "unknown value '" + std::string(name) + "'");
}

PosetValue ValuePoset::value(std::string_view name) const { return value(id_of(name)); }

void ValuePoset::check(PosetValue v) const {
  if (v.poset != uid_ || v.id >= size())
    throw Error(ErrorKind::DomainMismatch, "value belongs to a different poset");
}

bool ValuePoset::leq(PosetValue a, PosetValue b) const {
  check(a);
  check(b);
  return leq_id(a.id, b.id);
}

bool ValuePoset::lt(PosetValue a, PosetValue b) const { return leq(a, b) && a.id != b.id; }

bool ValuePoset::comparable(PosetValue a, PosetValue b) const { return leq(a, b) || leq(b, a); }

bool ValuePoset::is_total() const {
  for (ValueId a = 0; a < size(); ++a)
    for (ValueId b = a + 1; b < size(); ++b)
      if (!comparable_id(a, b)) return false;
  return true;
}

std::vector<std::pair<ValueId, ValueId>> ValuePoset::relation() const {
  std::vector<std::pair<ValueId, ValueId>> out;
  for (ValueId a = 0; a < size(); ++a)
    for (ValueId b = 0; b < size(); ++b)
      if (leq_id(a, b)) out.emplace_back(a, b);
  return out;
}

ValuePoset product_poset(const ValuePoset& p, const ValuePoset& q) {
  const std::size_t np = p.size(), nq = q.size();
  std::vector<std::string> names;
  for (ValueId i = 0; i < np; ++i)
    for (ValueId j = 0; j < nq; ++j) names.push_back("(" + p.name(i) + "," + q.name(j) + ")");
  std::vector<std::pair<ValueId, ValueId>> pairs;
  for (ValueId a = 0; a < np * nq; ++a)
    for (ValueId b = 0; b < np * nq; ++b)
      if (p.leq_id(a / nq, b / nq) && q.leq_id(a % nq, b % nq)) pairs.emplace_back(a, b);
  return ValuePoset(std::move(names), pairs, p.bottom_id() * nq + q.bottom_id());
}

bool leq(const ValuePoset& poset, PosetValue a, PosetValue b) { return poset.leq(a, b); }
bool comparable(const ValuePoset& poset, PosetValue a, PosetValue b) { return poset.comparable(a, b); }

ValuePoset random_poset(std::size_t n, double edge_probability, std::mt19937_64& rng) {
  if (n == 0) throw Error(ErrorKind::Precondition, "random poset needs at least one value");
  std::bernoulli_distribution edge(edge_probability);
  std::vector<std::pair<ValueId, ValueId>> pairs;
  for (ValueId i = 1; i < n; ++i) {
    pairs.emplace_back(0, i);
    for (ValueId j = i + 1; j < n; ++j)
      if (edge(rng)) pairs.emplace_back(i, j);
  }
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("g" + std::to_string(i));
  return ValuePoset::from_closure(std::move(names), pairs, 0);
}

}  // namespace ballfix
