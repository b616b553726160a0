#pragma once

#include "ncfa/word.hpp"
#include "ncfa/series.hpp"
#include "ncfa/series_io.hpp"
#include "ncfa/linalg.hpp"
#include "ncfa/tuple.hpp"
#include "ncfa/eval.hpp"
#include "ncfa/fock.hpp"
#include "ncfa/realization.hpp"
#include "ncfa/expr_text.hpp"
#include "ncfa/hardy.hpp"
#include "ncfa/rng.hpp"
#include "ncfa/randmat.hpp"
