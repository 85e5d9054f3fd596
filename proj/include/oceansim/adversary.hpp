#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "oceansim/engine.hpp"
#include "oceansim/packet.hpp"

namespace oceansim::adversary {

enum class Profile { Cooperative, Misleading, Selfish };

std::string_view to_string(Profile p);
std::optional<Profile> parse_profile(std::string_view s);

enum class RreqDecision { Participate, Ignore };
enum class ForwardDecision { Forward, Drop };

RreqDecision decide_rreq_participation(Profile p);

/// Transit-only decision; callers never consult it for packets the node
/// originates or terminates. `drop_stream` is drawn only when 0 < drop_prob < 1.
ForwardDecision decide_data_forward(Profile p, double drop_prob, RngStream& drop_stream);

/// Marks llround(fraction * n_nodes) nodes, drawn uniformly without
/// replacement, with `kind`; everyone else is cooperative.
std::vector<Profile> assign_profiles(RngStream& stream, std::size_t n_nodes, double malicious_fraction,
                                     Profile kind);

std::size_t malicious_count(std::size_t n_nodes, double malicious_fraction);

}  // namespace oceansim::adversary
