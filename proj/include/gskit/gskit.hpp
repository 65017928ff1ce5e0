#pragma once

#include "gskit/common.hpp"
#include "gskit/conjugate.hpp"
#include "gskit/fourier.hpp"
#include "gskit/functions.hpp"
#include "gskit/multiindex.hpp"
#include "gskit/scenario.hpp"
#include "gskit/seminorms.hpp"
#include "gskit/serialize.hpp"
#include "gskit/theorems.hpp"
#include "gskit/weights.hpp"
