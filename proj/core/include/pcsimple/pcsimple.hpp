#pragma once

#include "pcsimple/dataset.hpp"
#include "pcsimple/errors.hpp"
#include "pcsimple/evaluation.hpp"
#include "pcsimple/io.hpp"
#include "pcsimple/model.hpp"
#include "pcsimple/oracle.hpp"
#include "pcsimple/pc_simple.hpp"
#include "pcsimple/rng.hpp"
#include "pcsimple/stats.hpp"
