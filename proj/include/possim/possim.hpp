#pragma once

#include "possim/contour.hpp"
#include "possim/errors.hpp"
#include "possim/grid.hpp"
#include "possim/hypothesis.hpp"
#include "possim/inference.hpp"
#include "possim/io.hpp"
#include "possim/likelihood.hpp"
#include "possim/math.hpp"
#include "possim/model.hpp"
#include "possim/multimodel.hpp"
#include "possim/observation.hpp"
#include "possim/parallel.hpp"
#include "possim/rng.hpp"
#include "possim/validity.hpp"
#include "possim/version.hpp"
