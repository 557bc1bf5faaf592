#ifndef LEGPRO_LEGPRO_HPP
#define LEGPRO_LEGPRO_HPP

#include <legpro/rational.hpp>
#include <legpro/matrix.hpp>
#include <legpro/exactla.hpp>
#include <legpro/symplectic.hpp>
#include <legpro/prolong.hpp>
#include <legpro/legendrian.hpp>
#include <legpro/splitting.hpp>
#include <legpro/verifier.hpp>

#endif  // LEGPRO_LEGPRO_HPP
