#pragma once

#include "covsim/circuit.hpp"
#include "covsim/fidelity.hpp"
#include "covsim/measurement.hpp"
#include "covsim/phasespace.hpp"
#include "covsim/rng.hpp"
#include "covsim/serialize.hpp"
#include "covsim/states.hpp"
#include "covsim/types.hpp"
#include "covsim/unitaries.hpp"
