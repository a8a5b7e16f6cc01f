#pragma once

#include "chipfire/equivalence.hpp"
#include "chipfire/graph.hpp"
#include "chipfire/io.hpp"
#include "chipfire/jacobian.hpp"
#include "chipfire/matrix.hpp"
#include "chipfire/metric.hpp"
#include "chipfire/metric_potential.hpp"
#include "chipfire/metric_reduce.hpp"
#include "chipfire/number.hpp"
#include "chipfire/pentagon.hpp"
#include "chipfire/potential.hpp"
#include "chipfire/random.hpp"
#include "chipfire/reduced.hpp"
#include "chipfire/smith.hpp"
#include "chipfire/tree_bijection.hpp"
