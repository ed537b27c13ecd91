#pragma once

#include "frechet/batch.hpp"
#include "frechet/bench.hpp"
#include "frechet/combinators.hpp"
#include "frechet/curve.hpp"
#include "frechet/curve_csv.hpp"
#include "frechet/distance_matrix.hpp"
#include "frechet/error.hpp"
#include "frechet/kernels.hpp"
#include "frechet/metric.hpp"
#include "frechet/random_walk.hpp"
#include "frechet/related.hpp"
