// Umbrella header.
#pragma once

#include "cqbl/channel.hpp"
#include "cqbl/channel_spec.hpp"
#include "cqbl/code_sim.hpp"
#include "cqbl/common.hpp"
#include "cqbl/converse.hpp"
#include "cqbl/entropic.hpp"
#include "cqbl/linalg.hpp"
#include "cqbl/operator_core.hpp"
#include "cqbl/random.hpp"
#include "cqbl/region.hpp"
#include "cqbl/semigroup.hpp"
#include "cqbl/standard_channels.hpp"
#include "cqbl/verify.hpp"
