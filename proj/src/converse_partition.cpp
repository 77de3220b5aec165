#include "mnac/converse_partition.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mnac/errors.hpp"
#include "mnac/special_functions.hpp"

namespace mnac {

int hamming(const MessageVector& a, const MessageVector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("message vectors differ in length");
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]);
  return d;
}

double type_class_size(int ell, int M, int t) {
  if (t < 0 || t > ell) return 0.0;
  return std::round(std::exp(log_binomial(ell, t) + t * std::log(static_cast<double>(M))));
}

namespace {

void enumerate(int pos, int remaining, MessageVector& current, TypeClass& tc) {
  if (pos == tc.ell) {
    if (remaining == 0) tc.members.push_back(current);
    return;
  }
  const int slots_left = tc.ell - pos;
  if (remaining < slots_left) {
    current[pos] = 0;
    enumerate(pos + 1, remaining, current, tc);
  }
  if (remaining > 0) {
    for (int w = 1; w <= tc.M; ++w) {
      current[pos] = w;
      enumerate(pos + 1, remaining - 1, current, tc);
    }
  }
  current[pos] = 0;
}

std::vector<std::size_t> greedy_indices(const TypeClass& tc, int dmin) {
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < tc.members.size(); ++i) {
    bool far = true;
    for (std::size_t c : chosen) {
      if (hamming(tc.members[i], tc.members[c]) < dmin) {
        far = false;
        break;
      }
    }
    if (far) chosen.push_back(i);
  }
  return chosen;
}

}  // namespace

TypeClass enumerate_type_class(int ell, int M, int t, double budget) {
  if (ell < 1 || M < 1 || t < 0 || t > ell) throw DomainError("invalid type class parameters");
  if (type_class_size(ell, M, t) > budget) throw BudgetExceeded("type class exceeds the enumeration budget");
  TypeClass tc{ell, M, t, {}};
  MessageVector current(ell, 0);
  enumerate(0, t, current, tc);
  return tc;
}

std::vector<MessageVector> greedy_min_dist_code(const TypeClass& tc, int dmin) {
  if (dmin < 1) throw DomainError("minimum distance must be >= 1");
  std::vector<MessageVector> code;
  for (std::size_t i : greedy_indices(tc, dmin)) code.push_back(tc.members[i]);
  return code;
}

Partition build_partition(int ell, int M, int t, double budget) {
  if (ell < 5) throw DomainError("partition needs ell >= 5");
  if (M < 2) throw DomainError("partition needs M >= 2");
  if (t < 1 || t > ell) throw DomainError("weight t must lie in 1..ell");
  const TypeClass tc = enumerate_type_class(ell, M, t, budget);
  Partition p{ell, M, t, {}};
  if (t == 1) {
    p.sets.push_back({tc.members.front(), tc.members});
    return p;
  }
  const auto centers = greedy_indices(tc, 5);
  for (std::size_t c : centers) p.sets.push_back({tc.members[c], {}});

  std::vector<int> owner(tc.members.size(), -1);
  for (std::size_t i = 0; i < tc.members.size(); ++i) {
    for (std::size_t d = 0; d < centers.size(); ++d) {
      if (hamming(tc.members[i], tc.members[centers[d]]) <= 2) {
        owner[i] = static_cast<int>(d);
        break;
      }
    }
  }
  for (std::size_t i = 0; i < tc.members.size(); ++i) {
    if (owner[i] >= 0) continue;
    for (std::size_t d = 0; d < centers.size(); ++d) {
      if (hamming(tc.members[i], tc.members[centers[d]]) <= 4) {
        owner[i] = static_cast<int>(d);
        break;
      }
    }
  }
  for (std::size_t i = 0; i < tc.members.size(); ++i) {
    // maximality of the greedy code makes this unreachable
    if (owner[i] < 0) throw std::logic_error("member outside the covering radius of the code");
    p.sets[owner[i]].members.push_back(tc.members[i]);
  }
  return p;
}

PartitionReport verify_partition(const Partition& p) {
  PartitionReport rep;
  std::map<MessageVector, int> seen;
  for (const auto& s : p.sets) {
    for (const auto& m : s.members) {
      if (++seen[m] > 1) rep.disjoint = false;
    }
  }
  const TypeClass tc = enumerate_type_class(p.ell, p.M, p.t);
  if (seen.size() != tc.members.size()) rep.covers = false;
  for (const auto& m : tc.members) {
    if (!seen.count(m)) rep.covers = false;
  }

  rep.min_size = p.sets.empty() ? 0 : p.sets.front().members.size();
  for (const auto& s : p.sets) {
    SetMetrics sm;
    sm.size = s.members.size();
    for (std::size_t i = 0; i < s.members.size(); ++i) {
      sm.center_radius = std::max(sm.center_radius, hamming(s.members[i], s.center));
      for (std::size_t j = i + 1; j < s.members.size(); ++j) {
        sm.diameter = std::max(sm.diameter, hamming(s.members[i], s.members[j]));
      }
    }
    rep.min_size = std::min(rep.min_size, sm.size);
    rep.max_diameter = std::max(rep.max_diameter, sm.diameter);
    if (sm.size < static_cast<std::size_t>(p.ell) + 1) rep.sizes_ok = false;
    if (sm.diameter > 8) rep.diameters_ok = false;
    rep.sets.push_back(sm);
  }
  if (p.t >= 2) {
    for (std::size_t i = 0; i < p.sets.size(); ++i) {
      for (std::size_t j = i + 1; j < p.sets.size(); ++j) {
        if (hamming(p.sets[i].center, p.sets[j].center) < 5) rep.centers_separated = false;
      }
    }
  }
  return rep;
}

double typeclass_probability(int ell, int M, int t, double alpha) {
  if (ell < 1 || M < 1 || t < 0 || t > ell) throw DomainError("invalid type class parameters");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
  const double per_vector = std::pow(1.0 - alpha, ell - t) * std::pow(alpha / M, t);
  return per_vector * type_class_size(ell, M, t);
}

}  // namespace mnac
