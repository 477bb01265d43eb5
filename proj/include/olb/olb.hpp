#pragma once

#include "olb/billiard_map.hpp"
#include "olb/dual.hpp"
#include "olb/errors.hpp"
#include "olb/genfun.hpp"
#include "olb/geometry.hpp"
#include "olb/numeric.hpp"
#include "olb/periodic_orbits.hpp"
#include "olb/polygon.hpp"
#include "olb/quintic_spline.hpp"
#include "olb/support_oval.hpp"
#include "olb/table_forge.hpp"
