#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chaindiff/errors.hpp"

namespace chaindiff {

// Blocks sorted by smallest element, elements ascending within each block.
struct Partition {
  std::vector<std::vector<int>> blocks;
  friend bool operator==(const Partition&, const Partition&) = default;
};

struct IndexSubset {
  std::vector<int> elements;  // ascending
  int ground_size = 0;
  friend bool operator==(const IndexSubset&, const IndexSubset&) = default;
};

// All partitions of {1..n}, grown one element at a time: each partition of
// {1..n-1} yields one with {n} as a new block plus one per block absorbing n.
// List ordered by the partitions' growth strings (block label of element i,
// blocks numbered by first appearance), lexicographically.
std::vector<Partition> partitions(int n, int cap = 12);

// All 2^n subsets of {1..n}, ordered by size then lexicographically.
std::vector<IndexSubset> subsets(int n);

IndexSubset complement(const IndexSubset& s);

std::int64_t bell(int n);
std::int64_t stirling2(int n, int k);

std::string to_string(const Partition& p);    // {{1,2},{3}}
std::string to_string(const IndexSubset& s);  // {1,3}

}  // namespace chaindiff
