#pragma once

#include "delab/bounds.hpp"
#include "delab/delaunay.hpp"
#include "delab/errors.hpp"
#include "delab/geom.hpp"
#include "delab/harness.hpp"
#include "delab/hull.hpp"
#include "delab/lp.hpp"
#include "delab/rng.hpp"
#include "delab/sample.hpp"
#include "delab/special.hpp"
#include "delab/svg.hpp"
#include "delab/cli.hpp"
