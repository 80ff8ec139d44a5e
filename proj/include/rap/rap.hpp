// Copyright (c) the rapeig developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "rap/bench.hpp"
#include "rap/core.hpp"
#include "rap/diagnostics.hpp"
#include "rap/error.hpp"
#include "rap/fem.hpp"
#include "rap/lorag.hpp"
#include "rap/matrix_market.hpp"
#include "rap/paired.hpp"
#include "rap/preconditioner.hpp"
#include "rap/schwarz.hpp"
#include "rap/solvers.hpp"
#include "rap/sphere.hpp"
#include "rap/spd_matrix.hpp"
