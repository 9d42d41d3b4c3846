#pragma once

#include "knotforge/errors.hpp"
#include "knotforge/geometry.hpp"
#include "knotforge/intersect.hpp"
#include "knotforge/state.hpp"
#include "knotforge/tracker.hpp"
#include "knotforge/laurent.hpp"
#include "knotforge/invariants.hpp"
#include "knotforge/diagram.hpp"
#include "knotforge/render.hpp"
#include "knotforge/json_io.hpp"
