#pragma once

#include "elmap/assignment.hpp"
#include "elmap/config.hpp"
#include "elmap/cultures.hpp"
#include "elmap/dap.hpp"
#include "elmap/distances.hpp"
#include "elmap/election.hpp"
#include "elmap/embedding.hpp"
#include "elmap/error.hpp"
#include "elmap/fraction.hpp"
#include "elmap/pairwise.hpp"
#include "elmap/preflib.hpp"
#include "elmap/random.hpp"
#include "elmap/render.hpp"
#include "elmap/robustness.hpp"
#include "elmap/transport.hpp"
