#ifndef QDECAY_QDECAY_HPP
#define QDECAY_QDECAY_HPP

#include "qdecay/critical.hpp"
#include "qdecay/density.hpp"
#include "qdecay/errors.hpp"
#include "qdecay/grid.hpp"
#include "qdecay/modulation.hpp"
#include "qdecay/poles.hpp"
#include "qdecay/specfun.hpp"
#include "qdecay/survival.hpp"

#endif  // QDECAY_QDECAY_HPP
