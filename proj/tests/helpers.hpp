// Test fixtures: the shared generators and brute-force oracles live in
// latticedmt/verify.hpp so the verify subcommand and the acceptance suite
// use the same reference implementations.
#pragma once

#include "latticedmt/latticedmt.hpp"
#include "latticedmt/verify.hpp"

namespace ldmt::test {

using verify::brute_force_cvp;
using verify::brute_force_shortest;
using verify::BruteForceCvp;
using verify::random_cmat;
using verify::random_cmat_with_cond;
using verify::random_gauss_vec;
using verify::random_uppertri;

}  // namespace ldmt::test
