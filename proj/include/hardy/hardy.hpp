// Copyright 2026 The hardy-xp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hardy/config.hpp"
#include "hardy/errors.hpp"
#include "hardy/grid.hpp"
#include "hardy/io/csv.hpp"
#include "hardy/io/json.hpp"
#include "hardy/lhv.hpp"
#include "hardy/numerics.hpp"
#include "hardy/probabilities.hpp"
#include "hardy/profile.hpp"
#include "hardy/sampler.hpp"
#include "hardy/state.hpp"
#include "hardy/transforms.hpp"
#include "hardy/version.hpp"
