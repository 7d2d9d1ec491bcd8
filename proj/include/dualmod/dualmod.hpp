#ifndef DUALMOD_DUALMOD_HPP
#define DUALMOD_DUALMOD_HPP

#include "dualmod/dual_number.hpp"
#include "dualmod/dual_vector.hpp"
#include "dualmod/module_map.hpp"
#include "dualmod/elimination.hpp"
#include "dualmod/expr.hpp"
#include "dualmod/diff.hpp"
#include "dualmod/manifold.hpp"
#include "dualmod/symplectic.hpp"
#include "dualmod/random.hpp"
#include "dualmod/json_io.hpp"
#include "dualmod/selftest.hpp"

#endif  // DUALMOD_DUALMOD_HPP
