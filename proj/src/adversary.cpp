#include "oceansim/adversary.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace oceansim::adversary {

std::string_view to_string(Profile p) {
  switch (p) {
    case Profile::Cooperative: return "cooperative";
    case Profile::Misleading: return "misleading";
    case Profile::Selfish: return "selfish";
  }
  return "cooperative";
}

std::optional<Profile> parse_profile(std::string_view s) {
  if (s == "cooperative") return Profile::Cooperative;
  if (s == "misleading") return Profile::Misleading;
  if (s == "selfish") return Profile::Selfish;
  return std::nullopt;
}

RreqDecision decide_rreq_participation(Profile p) {
  return p == Profile::Selfish ? RreqDecision::Ignore : RreqDecision::Participate;
}

ForwardDecision decide_data_forward(Profile p, double drop_prob, RngStream& drop_stream) {
  switch (p) {
    case Profile::Cooperative:
      return ForwardDecision::Forward;
    case Profile::Selfish:
      // Only reachable through a stale route; a selfish node never relays.
      return ForwardDecision::Drop;
    case Profile::Misleading:
      if (drop_prob >= 1.0) return ForwardDecision::Drop;
      if (drop_prob <= 0.0) return ForwardDecision::Forward;
      return drop_stream.next() < drop_prob ? ForwardDecision::Drop : ForwardDecision::Forward;
  }
  return ForwardDecision::Forward;
}

std::size_t malicious_count(std::size_t n_nodes, double malicious_fraction) {
  if (!(malicious_fraction >= 0.0 && malicious_fraction <= 1.0))
    throw std::invalid_argument("malicious_fraction must lie in [0, 1]");
  return static_cast<std::size_t>(std::llround(malicious_fraction * static_cast<double>(n_nodes)));
}

std::vector<Profile> assign_profiles(RngStream& stream, std::size_t n_nodes, double malicious_fraction,
                                     Profile kind) {
  const std::size_t k = malicious_count(n_nodes, malicious_fraction);
  std::vector<Profile> profiles(n_nodes, Profile::Cooperative);
  // Partial Fisher-Yates: the first k slots end up a uniform k-subset.
  std::vector<NodeId> ids(n_nodes);
  std::iota(ids.begin(), ids.end(), NodeId{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(stream.below(n_nodes - i));
    std::swap(ids[i], ids[j]);
    profiles[ids[i]] = kind;
  }
  return profiles;
}

}  // namespace oceansim::adversary
