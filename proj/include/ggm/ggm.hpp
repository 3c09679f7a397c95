#pragma once

#include "ggm/hilbert.hpp"
#include "ggm/states.hpp"
#include "ggm/ggm_pure.hpp"
#include "ggm/twirl.hpp"
#include "ggm/family.hpp"
#include "ggm/phase_search.hpp"
#include "ggm/convexity.hpp"
#include "ggm/closed_form.hpp"
#include "ggm/roof_bound.hpp"
#include "ggm/surface.hpp"
