// Umbrella header.
#pragma once

#include "latticedmt/channel.hpp"
#include "latticedmt/codes.hpp"
#include "latticedmt/decoders.hpp"
#include "latticedmt/errors.hpp"
#include "latticedmt/gaussint.hpp"
#include "latticedmt/harness.hpp"
#include "latticedmt/io.hpp"
#include "latticedmt/linalg.hpp"
#include "latticedmt/reduction.hpp"
#include "latticedmt/rng.hpp"
