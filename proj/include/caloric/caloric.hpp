#pragma once

#include "caloric/types.hpp"
#include "caloric/special.hpp"
#include "caloric/roots.hpp"
#include "caloric/caloric_poly.hpp"
#include "caloric/entire_series.hpp"
#include "caloric/heat_propagate.hpp"
#include "caloric/order_type.hpp"
#include "caloric/zero_dynamics.hpp"
#include "caloric/debruijn.hpp"
#include "caloric/io.hpp"
