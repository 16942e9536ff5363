#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "rovib/params.hpp"

namespace rovib::quantum {

// One rovibrational product state |n> (x) |l m>.
struct StateIndex {
  int n = 0;
  int l = 0;
  int m = 0;
  friend constexpr auto operator<=>(const StateIndex&, const StateIndex&) = default;
};

// Class label m - n. The drive changes n and m together, so this label is
// conserved; the physical constant of motion is (m - n) - 1/2.
constexpr int k_class(const StateIndex& idx) { return idx.m - idx.n; }

// Ordered truncated basis with O(1) position lookup. Immutable once built.
class Basis {
 public:
  // All (n, l, m) with n <= n_max, l <= l_max, |m| <= l, ordered
  // lexicographically by (n, l, m). n_max must not exceed the spectrum bound
  // for the given parameters. An optional filter keeps only the listed
  // m - n classes.
  static Basis build(int n_max, int l_max, const ModelParameters& params,
                     const std::optional<std::set<int>>& k_filter = std::nullopt);

  // Explicit state list (e.g. the two states of a resonant pair); the given
  // order is kept.
  static Basis from_states(std::vector<StateIndex> states);

  std::size_t size() const { return states_.size(); }
  const std::vector<StateIndex>& states() const { return states_; }
  const StateIndex& state(std::size_t i) const { return states_[i]; }
  std::optional<std::size_t> find(const StateIndex& idx) const;

  int n_cap() const { return n_cap_; }
  int l_cap() const { return l_cap_; }

 private:
  Basis() = default;
  void index_states();

  std::vector<StateIndex> states_;
  std::unordered_map<std::int64_t, std::size_t> lookup_;
  int n_cap_ = 0;
  int l_cap_ = 0;
};

}  // namespace rovib::quantum
