#ifndef DUALMOD_SELFTEST_HPP
#define DUALMOD_SELFTEST_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace dualmod {

struct SelftestConfig {
  std::size_t samples = 100;
  std::uint64_t seed = 0;
  /// Name of a deliberately broken ingredient to swap in ("product_rule"
  /// replaces the scalar product by the split-complex one). Empty for none.
  std::string fault;
};

struct InvariantResult {
  std::string module;
  std::string name;
  bool passed = true;
  double worst = 0;  ///< largest residual seen (or count of violations)
  double threshold = 0;
  std::size_t trials = 0;
};

/// Runs the property suites of every module. Deterministic for a given
/// config; each invariant draws from its own generator seeded from
/// config.seed and the invariant's position.
std::vector<InvariantResult> run_selftest(const SelftestConfig& config);

}  // namespace dualmod

#endif  // DUALMOD_SELFTEST_HPP
