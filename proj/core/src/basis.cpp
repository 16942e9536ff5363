#include "rovib/basis.hpp"

#include <stdexcept>

#include "rovib/errors.hpp"
#include "rovib/matrix_elements.hpp"

namespace rovib::quantum {

namespace {

std::int64_t pack_key(const StateIndex& idx) {
  // n, l stay small; m can be negative.
  return (static_cast<std::int64_t>(idx.n) << 40) | (static_cast<std::int64_t>(idx.l) << 20) |
         static_cast<std::int64_t>(idx.m + (1 << 19));
}

}  // namespace

void Basis::index_states() {
  lookup_.reserve(states_.size());
  n_cap_ = 0;
  l_cap_ = 0;
  for (std::size_t i = 0; i < states_.size(); ++i) {
    const StateIndex& s = states_[i];
    if (s.n < 0 || s.l < 0 || std::abs(s.m) > s.l)
      throw ConfigError("basis: invalid quantum numbers (need n, l >= 0 and |m| <= l)");
    if (!lookup_.emplace(pack_key(s), i).second) throw ConfigError("basis: duplicate state");
    n_cap_ = std::max(n_cap_, s.n);
    l_cap_ = std::max(l_cap_, s.l);
  }
}

Basis Basis::build(int n_max, int l_max, const ModelParameters& params,
                   const std::optional<std::set<int>>& k_filter) {
  if (n_max < 0 || l_max < 0) throw ConfigError("basis: caps must be nonnegative");
  const int bound = n_bound(params);
  if (n_max > bound)
    throw ConfigError("basis: n_max " + std::to_string(n_max) +
                      " exceeds the spectrum bound " + std::to_string(bound));
  Basis basis;
  for (int n = 0; n <= n_max; ++n)
    for (int l = 0; l <= l_max; ++l)
      for (int m = -l; m <= l; ++m) {
        if (k_filter && !k_filter->count(m - n)) continue;
        basis.states_.push_back({n, l, m});
      }
  basis.index_states();
  return basis;
}

Basis Basis::from_states(std::vector<StateIndex> states) {
  Basis basis;
  basis.states_ = std::move(states);
  basis.index_states();
  return basis;
}

std::optional<std::size_t> Basis::find(const StateIndex& idx) const {
  auto it = lookup_.find(pack_key(idx));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

}  // namespace rovib::quantum
