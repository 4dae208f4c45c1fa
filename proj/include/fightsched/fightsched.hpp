#pragma once

#include "fightsched/bipartite.hpp"
#include "fightsched/coloring.hpp"
#include "fightsched/core.hpp"
#include "fightsched/generator.hpp"
#include "fightsched/instance.hpp"
#include "fightsched/model.hpp"
#include "fightsched/schedule.hpp"
#include "fightsched/solver.hpp"
#include "fightsched/validate.hpp"
