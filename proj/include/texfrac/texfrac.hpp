#pragma once

// Umbrella header for the texfrac texture-analysis library.

#include "texfrac/classify.hpp"
#include "texfrac/error.hpp"
#include "texfrac/evaluate.hpp"
#include "texfrac/fractal.hpp"
#include "texfrac/glcm.hpp"
#include "texfrac/image.hpp"
#include "texfrac/linreg.hpp"
#include "texfrac/pgm.hpp"
#include "texfrac/pipeline.hpp"
#include "texfrac/rng.hpp"
#include "texfrac/synth.hpp"
