#include "chaindiff/combinatorics.hpp"

#include <algorithm>
#include <array>

namespace chaindiff {

namespace {

void canonicalize_blocks(Partition& p) {
  for (auto& b : p.blocks) std::sort(b.begin(), b.end());
  std::sort(p.blocks.begin(), p.blocks.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

// Block label of each element in order, blocks numbered by first appearance.
std::vector<int> growth_string(const Partition& p, int n) {
  std::vector<int> g(n, 0);
  for (size_t bi = 0; bi < p.blocks.size(); ++bi)
    for (int e : p.blocks[bi]) g[e - 1] = static_cast<int>(bi);
  return g;
}

}  // namespace

std::vector<Partition> partitions(int n, int cap) {
  if (n < 0) throw ArgumentError("partitions of a negative ground set");
  if (n > cap)
    throw ArgumentError("partitions(" + std::to_string(n) +
                        ") exceeds the cap of " + std::to_string(cap));
  std::vector<Partition> acc = {Partition{}};
  for (int k = 1; k <= n; ++k) {
    std::vector<Partition> next;
    for (const Partition& p : acc) {
      Partition grown = p;
      grown.blocks.push_back({k});
      next.push_back(std::move(grown));
      for (size_t bi = 0; bi < p.blocks.size(); ++bi) {
        Partition absorbed = p;
        absorbed.blocks[bi].push_back(k);
        next.push_back(std::move(absorbed));
      }
    }
    acc = std::move(next);
  }
  for (Partition& p : acc) canonicalize_blocks(p);
  std::sort(acc.begin(), acc.end(), [n](const Partition& a, const Partition& b) {
    return growth_string(a, n) < growth_string(b, n);
  });
  return acc;
}

std::vector<IndexSubset> subsets(int n) {
  if (n < 0) throw ArgumentError("subsets of a negative ground set");
  if (n > 30) throw ArgumentError("subset ground set too large");
  std::vector<IndexSubset> out;
  out.reserve(1u << n);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    IndexSubset s;
    s.ground_size = n;
    for (int i = 1; i <= n; ++i)
      if (mask & (1u << (i - 1))) s.elements.push_back(i);
    out.push_back(std::move(s));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const IndexSubset& a, const IndexSubset& b) {
                     if (a.elements.size() != b.elements.size())
                       return a.elements.size() < b.elements.size();
                     return a.elements < b.elements;
                   });
  return out;
}

IndexSubset complement(const IndexSubset& s) {
  IndexSubset out;
  out.ground_size = s.ground_size;
  auto it = s.elements.begin();
  for (int i = 1; i <= s.ground_size; ++i) {
    if (it != s.elements.end() && *it == i) {
      ++it;
    } else {
      out.elements.push_back(i);
    }
  }
  return out;
}

namespace {
constexpr int kStirlingMax = 25;

const std::int64_t* stirling_table() {
  static const auto table = [] {
    static std::int64_t t[kStirlingMax + 1][kStirlingMax + 1] = {};
    t[0][0] = 1;
    for (int n = 1; n <= kStirlingMax; ++n)
      for (int k = 1; k <= n; ++k)
        t[n][k] = k * t[n - 1][k] + t[n - 1][k - 1];
    return &t[0][0];
  }();
  return table;
}
}  // namespace

std::int64_t stirling2(int n, int k) {
  if (n < 0 || k < 0 || k > n || n > kStirlingMax)
    throw ArgumentError("stirling2 arguments out of range");
  return stirling_table()[n * (kStirlingMax + 1) + k];
}

std::int64_t bell(int n) {
  if (n < 0 || n > kStirlingMax) throw ArgumentError("bell argument out of range");
  std::int64_t sum = 0;
  for (int k = 0; k <= n; ++k) sum += stirling2(n, k);
  return sum;
}

std::string to_string(const Partition& p) {
  std::string s = "{";
  for (size_t i = 0; i < p.blocks.size(); ++i) {
    if (i) s += ",";
    s += "{";
    for (size_t j = 0; j < p.blocks[i].size(); ++j) {
      if (j) s += ",";
      s += std::to_string(p.blocks[i][j]);
    }
    s += "}";
  }
  return s + "}";
}

std::string to_string(const IndexSubset& s) {
  std::string out = "{";
  for (size_t i = 0; i < s.elements.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s.elements[i]);
  }
  return out + "}";
}

}  // namespace chaindiff
