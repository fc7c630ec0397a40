#pragma once

#include "redop/errors.hpp"
#include "redop/expr/number.hpp"
#include "redop/expr/expr.hpp"
#include "redop/expr/print.hpp"
#include "redop/expr/parse.hpp"
#include "redop/expr/diff.hpp"
#include "redop/expr/eval.hpp"
#include "redop/expr/simplify.hpp"
