#pragma once

#include "mlat/error.hpp"
#include "mlat/experiments.hpp"
#include "mlat/model.hpp"
#include "mlat/numkernel.hpp"
#include "mlat/quadric.hpp"
#include "mlat/random.hpp"
#include "mlat/solver.hpp"
#include "mlat/uniqueness.hpp"
