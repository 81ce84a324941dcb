#pragma once

#include "experiment.hpp"
#include "generator.hpp"
#include "hierarchy.hpp"
#include "io.hpp"
#include "measures.hpp"
#include "perturbation.hpp"
#include "random.hpp"
#include "stats.hpp"
