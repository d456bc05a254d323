// Copyright 2026 The hardy-xp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hardy/numerics/exp_integral.hpp"
#include "hardy/numerics/fft.hpp"
#include "hardy/numerics/laguerre.hpp"
#include "hardy/numerics/oscillatory.hpp"
#include "hardy/numerics/quadrature.hpp"
#include "hardy/numerics/semi_infinite.hpp"
