#pragma once

#include "q1dlab/chaos.hpp"
#include "q1dlab/cli.hpp"
#include "q1dlab/config.hpp"
#include "q1dlab/core.hpp"
#include "q1dlab/experiments.hpp"
#include "q1dlab/lattice.hpp"
#include "q1dlab/oscillatory.hpp"
#include "q1dlab/parallel.hpp"
#include "q1dlab/random.hpp"
#include "q1dlab/report.hpp"
#include "q1dlab/rmt.hpp"
#include "q1dlab/sde.hpp"
#include "q1dlab/spectrum.hpp"
#include "q1dlab/stats.hpp"
#include "q1dlab/transfer.hpp"
