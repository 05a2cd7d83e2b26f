#pragma once

#include "lenslat/arith.hpp"
#include "lenslat/changemaker.hpp"
#include "lenslat/d_invariants.hpp"
#include "lenslat/ellipsoid.hpp"
#include "lenslat/lattice_core.hpp"
#include "lenslat/linear_lattice.hpp"
#include "lenslat/matrix.hpp"
#include "lenslat/parallel.hpp"
#include "lenslat/surgery_diagrams.hpp"
