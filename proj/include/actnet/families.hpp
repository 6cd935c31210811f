#pragma once

#include <cstddef>
#include <vector>

#include "actnet/family.hpp"
#include "actnet/mdp.hpp"

namespace actnet {

// The two deterministic two-state MDPs: state 0 = x1, state 1 = x2, action
// 0 = a1, action 1 = a2, discount 0.5, start state x2.
TabularMDP first_two_state_mdp();
TabularMDP second_two_state_mdp();

/// theta_1 = first MDP with probability rho, theta_2 = second otherwise.
/// Features are unit vectors 1_{(x,a)} in R^4.
EnvironmentFamily two_mdp_family(double rho);

/// Two singleton clusters {theta_1}, {theta_2} with masses (rho, 1 - rho).
ClusterPartition two_mdp_partition(double rho);

/// Canonical Gaussian process Q*(x, a) = <theta, phi(x, a)>, theta ~ N(0, I).
/// features[x][a] is phi(x, a); all share one dimension. Single-state
/// families also expose a one-state, zero-discount MDP per draw.
EnvironmentFamily canonical_gaussian_family(std::vector<std::vector<std::vector<double>>> features);

/// Meta-bandit with n i.i.d. standard normal arms (phi(a) = e_a).
EnvironmentFamily iid_bandit_family(std::size_t n);

/// n arms split into m consecutive clusters of n/m arms; a draw belongs to
/// the cluster holding its best arm. Throws if m does not divide n.
ClusterPartition iid_bandit_partition(std::size_t n, std::size_t m);

}  // namespace actnet
