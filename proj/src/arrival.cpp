#include "stabsec/arrival.hpp"

#include <stdexcept>

namespace stabsec {

bool is_permutation(const std::vector<int>& perm) {
  std::vector<char> seen(perm.size() + 1, 0);
  for (int v : perm) {
    if (v < 1 || v > static_cast<int>(perm.size()) || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

ArrivalProcess ArrivalProcess::uniform(int boy_count) {
  if (boy_count < 1) throw std::invalid_argument("ArrivalProcess: boy_count must be positive");
  ArrivalProcess p;
  p.kind = ArrivalKind::UniformPermutation;
  p.boy_count = boy_count;
  return p;
}

ArrivalProcess ArrivalProcess::explicit_order(std::vector<int> permutation) {
  if (!is_permutation(permutation))
    throw std::invalid_argument("ArrivalProcess: not a permutation of 1..n");
  ArrivalProcess p;
  p.kind = ArrivalKind::Explicit;
  p.boy_count = static_cast<int>(permutation.size());
  p.permutation = std::move(permutation);
  return p;
}

ArrivalProcess ArrivalProcess::adversarial(int boy_count, std::vector<double> probs) {
  if (boy_count < 1) throw std::invalid_argument("ArrivalProcess: boy_count must be positive");
  if (static_cast<int>(probs.size()) != boy_count - 1)
    throw std::invalid_argument("ArrivalProcess: need p_2..p_n, one probability per step");
  for (double q : probs)
    if (!(q >= 0.0 && q <= 1.0))
      throw std::invalid_argument("ArrivalProcess: probabilities must lie in [0,1]");
  ArrivalProcess p;
  p.kind = ArrivalKind::AdversarialD;
  p.boy_count = boy_count;
  p.probs = std::move(probs);
  return p;
}

std::string ArrivalProcess::describe() const {
  switch (kind) {
    case ArrivalKind::UniformPermutation: return "uniform";
    case ArrivalKind::Explicit: return "explicit";
    case ArrivalKind::AdversarialD: return "adversarial-d";
  }
  return "?";
}

std::vector<int> sample_arrival(const ArrivalProcess& process, Rng& rng) {
  const int n = process.boy_count;
  switch (process.kind) {
    case ArrivalKind::Explicit:
      return process.permutation;
    case ArrivalKind::UniformPermutation: {
      std::vector<int> perm(n);
      for (int i = 0; i < n; ++i) perm[i] = i + 1;
      for (int i = n - 1; i > 0; --i) {
        int j = rng.uniform_int(0, i);
        std::swap(perm[i], perm[j]);
      }
      return perm;
    }
    case ArrivalKind::AdversarialD: {
      std::vector<int> perm(n);
      int lo = 1, hi = n;  // remaining true ranks form a contiguous interval
      for (int k = 1; k < n; ++k) {
        // probs[i] = p_{i+2}; step k draws with p_{n+1-k}
        double p_top = process.probs[n - 1 - k];
        if (rng.uniform01() < p_top)
          perm[k - 1] = lo++;
        else
          perm[k - 1] = hi--;
      }
      perm[n - 1] = lo;
      return perm;
    }
  }
  throw std::logic_error("sample_arrival: bad kind");
}

}  // namespace stabsec
