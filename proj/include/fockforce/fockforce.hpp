#pragma once

// Umbrella header for the fockforce library.

#include "fockforce/collective.hpp"
#include "fockforce/errors.hpp"
#include "fockforce/fock.hpp"
#include "fockforce/io.hpp"
#include "fockforce/metrology.hpp"
#include "fockforce/numerics.hpp"
#include "fockforce/sampling.hpp"
#include "fockforce/states.hpp"
#include "fockforce/sweep.hpp"
#include "fockforce/verify.hpp"
