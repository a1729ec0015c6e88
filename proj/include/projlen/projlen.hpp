#pragma once

// Projected-length tomography of curves: the curve -> projective-measure
// correspondence, the cosine transform of the measure, and the inverse path
// from sampled transform data back to a representative broken line.

#include "projlen/cosine.hpp"
#include "projlen/curve.hpp"
#include "projlen/io.hpp"
#include "projlen/lp.hpp"
#include "projlen/measure.hpp"
#include "projlen/nnls.hpp"
#include "projlen/parallel.hpp"
#include "projlen/partition.hpp"
#include "projlen/projective.hpp"
#include "projlen/random.hpp"
#include "projlen/reconstruct.hpp"
#include "projlen/verify.hpp"
