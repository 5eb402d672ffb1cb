#pragma once

// Umbrella header for the whole library.

#include "rational.hpp"
#include "matrix.hpp"
#include "model.hpp"
#include "systems.hpp"
#include "lp.hpp"
#include "compat.hpp"
#include "completion.hpp"
#include "oracle.hpp"
#include "instance_io.hpp"
