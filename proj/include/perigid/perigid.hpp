#pragma once

#include <perigid/cones.hpp>
#include <perigid/constructions.hpp>
#include <perigid/double_description.hpp>
#include <perigid/error.hpp>
#include <perigid/exact.hpp>
#include <perigid/expansive.hpp>
#include <perigid/feasibility.hpp>
#include <perigid/framework.hpp>
#include <perigid/framework_io.hpp>
#include <perigid/motion.hpp>
#include <perigid/reports.hpp>
#include <perigid/rigidity.hpp>
