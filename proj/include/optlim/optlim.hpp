#pragma once

#include "optlim/error.hpp"
#include "optlim/quandle.hpp"
#include "optlim/dilog.hpp"
#include "optlim/diagram.hpp"
#include "optlim/coloring.hpp"
#include "optlim/potential.hpp"
#include "optlim/volume.hpp"
#include "optlim/job.hpp"
