#pragma once

// Classical simulation of entanglement swapping in the bilocal scenario:
// singlet correlations E(x, y) = -x.y from three parties exchanging exactly
// 9 classical bits per round, certified against closed forms by an
// independent quadrature oracle.

#include "swapsim/angle.hpp"
#include "swapsim/channel.hpp"
#include "swapsim/direction.hpp"
#include "swapsim/estimators.hpp"
#include "swapsim/multistage.hpp"
#include "swapsim/oracle.hpp"
#include "swapsim/protocol1.hpp"
#include "swapsim/protocol2.hpp"
#include "swapsim/quadrature.hpp"
#include "swapsim/random.hpp"
#include "swapsim/report.hpp"
#include "swapsim/runner.hpp"
#include "swapsim/stats.hpp"
#include "swapsim/tcp.hpp"
#include "swapsim/wire.hpp"
