#pragma once

#include <vector>

#include "mnac/system_model.hpp"

namespace mnac {

// All message vectors of length ell over {0..M} with exactly t nonzero
// entries, in lexicographic order.
struct TypeClass {
  int ell = 0;
  int M = 0;
  int t = 0;
  std::vector<MessageVector> members;
};

struct PartitionSet {
  MessageVector center;
  std::vector<MessageVector> members;
};

struct Partition {
  int ell = 0;
  int M = 0;
  int t = 0;
  std::vector<PartitionSet> sets;
};

struct SetMetrics {
  std::size_t size = 0;
  int diameter = 0;
  int center_radius = 0;
};

struct PartitionReport {
  bool disjoint = true;
  bool covers = true;
  bool sizes_ok = true;      // every set has at least ell + 1 members
  bool diameters_ok = true;  // every intra-set distance <= 8
  bool centers_separated = true;  // pairwise center distance >= 5 (t >= 2)
  std::size_t min_size = 0;
  int max_diameter = 0;
  std::vector<SetMetrics> sets;

  bool passed() const { return disjoint && covers && sizes_ok && diameters_ok && centers_separated; }
};

inline constexpr double kDefaultEnumerationBudget = 1e6;

int hamming(const MessageVector& a, const MessageVector& b);

double type_class_size(int ell, int M, int t);
TypeClass enumerate_type_class(int ell, int M, int t, double budget = kDefaultEnumerationBudget);

// Lexicographic greedy code: a member joins iff it is at distance >= dmin from
// every chosen word. The result is maximal, so every member lies within
// dmin - 1 of a codeword.
std::vector<MessageVector> greedy_min_dist_code(const TypeClass& tc, int dmin = 5);

// t = 1: one set. t >= 2: greedy distance-5 code inside the class; members
// within distance 2 of a codeword join it, the rest join the lowest-index
// codeword within distance 4.
Partition build_partition(int ell, int M, int t, double budget = kDefaultEnumerationBudget);

PartitionReport verify_partition(const Partition& p);

// Probability that the activity/message vector falls in the weight-t class.
double typeclass_probability(int ell, int M, int t, double alpha);

}  // namespace mnac
