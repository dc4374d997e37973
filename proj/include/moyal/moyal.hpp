#pragma once

// Umbrella header for the whole library.
#include "moyal/rational.hpp"
#include "moyal/scalars.hpp"
#include "moyal/errors.hpp"
#include "moyal/diffalg.hpp"
#include "moyal/symbols.hpp"
#include "moyal/lax.hpp"
#include "moyal/hirota.hpp"
#include "moyal/qcalc.hpp"
#include "moyal/parser.hpp"
