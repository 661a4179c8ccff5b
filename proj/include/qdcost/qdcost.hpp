#pragma once

// Umbrella header for the qdcost library: weak-measurement discord,
// pre/post-measurement fidelity, and the disturbance-vs-information cost
// C = Delta F + Delta D for two-qubit states.

#include "qdcost/correlations.hpp"
#include "qdcost/costfn.hpp"
#include "qdcost/errors.hpp"
#include "qdcost/matcore.hpp"
#include "qdcost/measure.hpp"
#include "qdcost/oracles.hpp"
#include "qdcost/states.hpp"
