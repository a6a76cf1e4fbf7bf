#pragma once

#include "hopfdisc/core.hpp"
#include "hopfdisc/geometry.hpp"
#include "hopfdisc/projective.hpp"
#include "hopfdisc/motion.hpp"
#include "hopfdisc/phase.hpp"
#include "hopfdisc/regularize.hpp"
#include "hopfdisc/topology.hpp"
#include "hopfdisc/hopf.hpp"
#include "hopfdisc/lift.hpp"
#include "hopfdisc/curvature.hpp"
#include "hopfdisc/report.hpp"
