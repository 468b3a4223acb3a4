#pragma once

#include "alpha_solver.hpp"
#include "errors.hpp"
#include "exact_chain.hpp"
#include "limit_laws.hpp"
#include "moments.hpp"
#include "problem_size.hpp"
#include "quadrature.hpp"
#include "random.hpp"
#include "regime.hpp"
#include "simulator.hpp"
#include "special_fn.hpp"
#include "statistics.hpp"
