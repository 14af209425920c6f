#ifndef MLAP_MLAP_HPP
#define MLAP_MLAP_HPP

#include "distance.hpp"
#include "error.hpp"
#include "generators.hpp"
#include "graph.hpp"
#include "numeric.hpp"
#include "operators.hpp"
#include "params.hpp"
#include "tree/construct.hpp"
#include "tree/lambda.hpp"
#include "tree/profile.hpp"
#include "verify/caccioppoli.hpp"
#include "verify/cutoff.hpp"
#include "verify/descent.hpp"
#include "verify/harnack.hpp"
#include "verify/parabolic.hpp"
#include "verify/residual.hpp"
#include "vertex_function.hpp"

#endif  // MLAP_MLAP_HPP
