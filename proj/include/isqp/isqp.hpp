#pragma once

#include "isqp/bench.hpp"
#include "isqp/derivative_check.hpp"
#include "isqp/errors.hpp"
#include "isqp/hessian.hpp"
#include "isqp/linalg.hpp"
#include "isqp/problem.hpp"
#include "isqp/problems.hpp"
#include "isqp/solver.hpp"
#include "isqp/step.hpp"
#include "isqp/types.hpp"
