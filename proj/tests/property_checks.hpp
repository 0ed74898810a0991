#pragma once

// Randomized exact property checks shared by the unit tests and the
// acceptance runner. Each returns an empty string on success, otherwise a
// description of the first counterexample.

#include <cstdint>
#include <string>
#include <vector>

#include "quatlat/orders.hpp"

namespace qtest {

std::string ring_identities(std::uint64_t seed, int trials);
std::string charpoly_annihilation(std::uint64_t seed, int trials);
std::string enumerate_vs_brute_force(std::uint64_t seed, int trials);
// Every element of the norm-one group has reduced norm exactly 1, lies in
// the order, and the group is closed under the product and inverse.
std::string norm_one_exact(const quatlat::QuatOrder& O);
// equal_up_to_2_power against R[1, i, j, k] for each order that contains it.
std::string up_to_2_power(const std::vector<quatlat::QuatOrder>& maximal);
// |disc_z| equals disc_target for each maximal (-1,-1) order.
std::string disc_matches_target(const std::vector<quatlat::QuatOrder>& maximal);

}  // namespace qtest
