#pragma once

#include "thsmooth/aux_fields.hpp"
#include "thsmooth/energy.hpp"
#include "thsmooth/grid.hpp"
#include "thsmooth/guidance.hpp"
#include "thsmooth/io.hpp"
#include "thsmooth/parallel.hpp"
#include "thsmooth/penalty.hpp"
#include "thsmooth/pipeline.hpp"
#include "thsmooth/solver.hpp"
#include "thsmooth/tasks.hpp"
