#pragma once

// Umbrella header: arithmetic on abelian varieties in algebraic theta
// coordinates over finite fields -- affine-cone addition chains, point
// compression, isogeny evaluation, Velu-like reconstruction from a kernel, and
// commutator/Weil pairings.

#include "chain.hpp"
#include "errors.hpp"
#include "field.hpp"
#include "index.hpp"
#include "isogeny.hpp"
#include "kummer.hpp"
#include "pairing.hpp"
#include "point.hpp"
#include "riemann.hpp"
#include "serialize.hpp"
#include "velu.hpp"
