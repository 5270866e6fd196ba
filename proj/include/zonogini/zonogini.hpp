#pragma once

#include "zonogini/convergence.hpp"
#include "zonogini/csv.hpp"
#include "zonogini/errors.hpp"
#include "zonogini/gini.hpp"
#include "zonogini/measures.hpp"
#include "zonogini/numeric.hpp"
#include "zonogini/rng.hpp"
#include "zonogini/volume.hpp"
#include "zonogini/zonotope.hpp"
