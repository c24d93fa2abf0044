// Umbrella header for the three-node wireless network toolkit.
#pragma once

#include "trinet/capacity.hpp"
#include "trinet/conference.hpp"
#include "trinet/csv.hpp"
#include "trinet/multicast.hpp"
#include "trinet/optimize.hpp"
#include "trinet/relay.hpp"
#include "trinet/sideinfo.hpp"
#include "trinet/source_model.hpp"
