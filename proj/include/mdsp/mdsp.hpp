#pragma once

#include "mdsp/errors.hpp"
#include "mdsp/rational.hpp"
#include "mdsp/linalg.hpp"
#include "mdsp/lattice.hpp"
#include "mdsp/exact.hpp"
#include "mdsp/heuristic.hpp"
#include "mdsp/cvp.hpp"
#include "mdsp/lll.hpp"
#include "mdsp/io.hpp"
#include "mdsp/bench.hpp"
