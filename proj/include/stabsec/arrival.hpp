#pragma once

#include <string>
#include <vector>

#include "stabsec/rng.hpp"

namespace stabsec {

enum class ArrivalKind { UniformPermutation, Explicit, AdversarialD };

// Arrival order generator. AdversarialD holds p_2..p_n (probs[i] = p_{i+2}):
// step k < n places the most preferred remaining boy with probability
// p_{n+1-k}, otherwise the least preferred remaining; the last boy is forced.
struct ArrivalProcess {
  ArrivalKind kind = ArrivalKind::UniformPermutation;
  int boy_count = 0;
  std::vector<int> permutation;  // Explicit only
  std::vector<double> probs;     // AdversarialD only, length boy_count - 1

  static ArrivalProcess uniform(int boy_count);
  static ArrivalProcess explicit_order(std::vector<int> permutation);
  static ArrivalProcess adversarial(int boy_count, std::vector<double> probs);

  std::string describe() const;
};

// time -> true boy index (1 = most preferred)
std::vector<int> sample_arrival(const ArrivalProcess& process, Rng& rng);

// true iff perm is a bijection on 1..perm.size()
bool is_permutation(const std::vector<int>& perm);

}  // namespace stabsec
