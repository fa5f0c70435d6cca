#include "ballfix/error.hpp"
#include "ballfix/point_set.hpp"
#include "ballfix/report.hpp"

#include <algorithm>
#include <sstream>

namespace ballfix {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidBall: return "invalid-ball";
    case ErrorKind::InvalidAssignment: return "invalid-assignment";
    case ErrorKind::UnsupportedMode: return "unsupported-mode";
    case ErrorKind::ContractViolation: return "contract-violation";
    case ErrorKind::DomainMismatch: return "domain-mismatch";
    case ErrorKind::NonUnitDerivative: return "non-unit-derivative";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::SpecViolation: return "spec-violation";
    case ErrorKind::NotAFixedPoint: return "not-a-fixed-point";
    case ErrorKind::EmptyPreimage: return "empty-preimage";
    case ErrorKind::BoundExceeded: return "bound-exceeded";
    case ErrorKind::Parse: return "parse-error";
    case ErrorKind::InternalAssertion: return "internal-assertion";
  }
  return "unknown";
}

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::FixedPointFound: return "fixed-point-found";
    case Outcome::HypothesisViolated: return "hypothesis-violated";
    case Outcome::BudgetExhausted: return "budget-exhausted";
    case Outcome::CertificateReached: return "certificate-reached";
  }
  return "unknown";
}

PointSet make_set(std::size_t universe, std::initializer_list<PointId> members) {
  return make_set(universe, std::span<const PointId>(members.begin(), members.size()));
}

PointSet make_set(std::size_t universe, std::span<const PointId> members) {
  PointSet s(universe);
  for (PointId p : members) {
    if (p >= universe) throw Error(ErrorKind::InvalidBall, "point index out of range");
    s.set(p);
  }
  return s;
}

PointSet full_set(std::size_t universe) {
  PointSet s(universe);
  s.set();
  return s;
}

PointSet singleton_set(std::size_t universe, PointId p) {
  PointSet s(universe);
  s.set(p);
  return s;
}

std::vector<PointId> members(const PointSet& s) {
  std::vector<PointId> out;
  out.reserve(s.count());
  for (auto i = s.find_first(); i != PointSet::npos; i = s.find_next(i)) out.push_back(i);
  return out;
}

bool tie_break_less(const PointSet& a, const PointSet& b) {
  const auto ca = a.count();
  const auto cb = b.count();
  if (ca != cb) return ca < cb;
  const auto ma = members(a);
  const auto mb = members(b);
  return std::lexicographical_compare(ma.begin(), ma.end(), mb.begin(), mb.end());
}

std::string format_set(const PointSet& s, std::span<const std::string> names) {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (PointId p : members(s)) {
    if (!first) out << ',';
    first = false;
    if (p < names.size())
      out << names[p];
    else
      out << p;
  }
  out << '}';
  return out.str();
}

std::string format_set(const PointSet& s) { return format_set(s, {}); }

bool ConditionReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.holds; });
}

const Check* ConditionReport::find(std::string_view tag) const {
  for (const auto& c : checks)
    if (c.tag == tag) return &c;
  return nullptr;
}

bool ConditionReport::holds(std::string_view tag) const { return at(tag).holds; }

const Check& ConditionReport::at(std::string_view tag) const {
  if (const Check* c = find(tag)) return *c;
  throw Error(ErrorKind::Precondition, "no check tagged " + std::string(tag));
}

Check& ConditionReport::add(std::string tag) {
  checks.emplace_back();
  checks.back().tag = std::move(tag);
  return checks.back();
}

}  // namespace ballfix
