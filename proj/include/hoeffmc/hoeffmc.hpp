#pragma once

#include "hoeffmc/alpha.hpp"
#include "hoeffmc/bounds.hpp"
#include "hoeffmc/chain.hpp"
#include "hoeffmc/errors.hpp"
#include "hoeffmc/extremal.hpp"
#include "hoeffmc/io.hpp"
#include "hoeffmc/learnlab.hpp"
#include "hoeffmc/linalg.hpp"
#include "hoeffmc/pool.hpp"
#include "hoeffmc/rng.hpp"
#include "hoeffmc/sim.hpp"
#include "hoeffmc/step_function.hpp"
