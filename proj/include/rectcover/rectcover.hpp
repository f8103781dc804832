#pragma once

#include "rectcover/bool_matrix.hpp"
#include "rectcover/cover_opt.hpp"
#include "rectcover/errors.hpp"
#include "rectcover/incidence.hpp"
#include "rectcover/io.hpp"
#include "rectcover/residue_cover.hpp"
