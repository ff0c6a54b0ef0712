#pragma once

#include "ellpow/int_matrix.hpp"
#include "ellpow/lattice.hpp"
#include "ellpow/permutation.hpp"
#include "ellpow/group.hpp"
#include "ellpow/gset.hpp"
#include "ellpow/tuples.hpp"
#include "ellpow/orbit_reduction.hpp"
#include "ellpow/coefficients.hpp"
#include "ellpow/structure_maps.hpp"
#include "ellpow/class_function.hpp"
#include "ellpow/power_operations.hpp"
#include "ellpow/rep_oracle.hpp"
#include "ellpow/serialization.hpp"
#include "ellpow/verify.hpp"
