#ifndef DOM_DOM_HPP
#define DOM_DOM_HPP

#include "dom/csv.hpp"
#include "dom/error.hpp"
#include "dom/exact2d.hpp"
#include "dom/harness.hpp"
#include "dom/indicators.hpp"
#include "dom/mip_model.hpp"
#include "dom/point_set.hpp"
#include "dom/solution.hpp"
#include "dom/solver.hpp"

#endif  // DOM_DOM_HPP
