#pragma once

// Umbrella header.

#include "sh/body.hpp"
#include "sh/config.hpp"
#include "sh/errors.hpp"
#include "sh/exact.hpp"
#include "sh/exponents.hpp"
#include "sh/exterior.hpp"
#include "sh/geometry.hpp"
#include "sh/goingdown.hpp"
#include "sh/height.hpp"
#include "sh/instances.hpp"
#include "sh/io.hpp"
#include "sh/lattice.hpp"
#include "sh/numberfield.hpp"
#include "sh/subspace.hpp"
#include "sh/verify.hpp"
