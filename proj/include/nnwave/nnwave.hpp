#pragma once

#include "arithmetic.hpp"
#include "calculus.hpp"
#include "errors.hpp"
#include "exprlang.hpp"
#include "io.hpp"
#include "koch.hpp"
#include "lorentz.hpp"
#include "wave.hpp"
