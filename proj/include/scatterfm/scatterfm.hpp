// SPDX-License-Identifier: Apache-2.0

#ifndef SCATTERFM_SCATTERFM_HPP
#define SCATTERFM_SCATTERFM_HPP

#include "scatterfm/errors.hpp"
#include "scatterfm/linalg.hpp"
#include "scatterfm/specfun.hpp"
#include "scatterfm/geometry.hpp"
#include "scatterfm/kernel.hpp"
#include "scatterfm/parallel.hpp"
#include "scatterfm/forward_bie.hpp"
#include "scatterfm/forward_medium.hpp"
#include "scatterfm/disc_oracle.hpp"
#include "scatterfm/farfield.hpp"
#include "scatterfm/factorization.hpp"
#include "scatterfm/scene_io.hpp"
#include "scatterfm/selftest.hpp"

#endif  // SCATTERFM_SCATTERFM_HPP
