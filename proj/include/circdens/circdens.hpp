#pragma once

#include "circdens/angles.hpp"
#include "circdens/bessel.hpp"
#include "circdens/censoring.hpp"
#include "circdens/config.hpp"
#include "circdens/coverage.hpp"
#include "circdens/distributions.hpp"
#include "circdens/estimator.hpp"
#include "circdens/evaluation.hpp"
#include "circdens/parallel.hpp"
#include "circdens/rng.hpp"
#include "circdens/sample_io.hpp"
#include "circdens/sieve.hpp"
#include "circdens/trig_basis.hpp"
